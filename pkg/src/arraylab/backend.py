"""Physics kernel selection: compiled extension when available, Python twin otherwise.

Set ARRAYLAB_BACKEND=py or =cy to force a backend; the default ("auto")
prefers the compiled kernel and silently falls back.
"""

import os

from .errors import ConfigError

BACKEND_ENV_VAR = "ARRAYLAB_BACKEND"


def _select():
    choice = os.environ.get(BACKEND_ENV_VAR, "auto")
    if choice not in ("auto", "py", "cy"):
        raise ConfigError(
            f"{BACKEND_ENV_VAR} must be one of auto/py/cy, got {choice!r}"
        )
    if choice in ("auto", "cy"):
        try:
            from . import _simcore as kernel
            return kernel, "cy"
        except ImportError:
            if choice == "cy":
                raise ConfigError(
                    "compiled kernel requested via ARRAYLAB_BACKEND=cy but "
                    "arraylab._simcore is not built"
                ) from None
    from . import _simcore_py as kernel
    return kernel, "py"


kernel, kernel_name = _select()
