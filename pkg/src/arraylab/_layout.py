"""Packed-array layouts shared by the Python and compiled physics kernels.

Both kernels operate on the same flat float64 state vectors so they stay
interchangeable; the compiled twin mirrors these offsets as C constants and
exposes LAYOUT_VERSION so a mismatch is caught by the test suite.
"""

LAYOUT_VERSION = 1

# --- object state vector ------------------------------------------------
OBJ_POS_X, OBJ_POS_Y, OBJ_POS_Z = 0, 1, 2   # center of mass, world frame
OBJ_VEL_X, OBJ_VEL_Y = 3, 4                 # horizontal velocity
OBJ_QBASE = 5                               # 5..8  orientation w/o transient tilt (w,x,y,z)
OBJ_YAW = 9                                 # footprint rotation about z
OBJ_HALF_HEIGHT = 10
OBJ_MASS = 11
OBJ_BOXLIKE = 12                            # 1.0 -> 90-degree topple remaps footprint
OBJ_NPREV = 13                              # 13..15 support normal from previous substep
OBJ_TOPPLE_ACTIVE = 16
OBJ_TOPPLE_ANGLE = 17                       # accumulated rotation of the active topple
OBJ_TOPPLE_AXIS_X, OBJ_TOPPLE_AXIS_Y = 18, 19
OBJ_PIVOT = 20                              # 20..22 pivot point on the support edge
OBJ_QPRE = 23                               # 23..26 exposed orientation at topple start
OBJ_POS_PRE = 27                            # 27..29 center of mass at topple start
OBJ_PLANE_A, OBJ_PLANE_B, OBJ_PLANE_C = 30, 31, 32   # support plane z = a*x + b*y + c
OBJ_TOPPLE_STEP_ANGLE = 33                  # rotation swept during the last control step
OBJ_TOPPLE_AXIS3 = 34                       # 34..36 axis of the most recent topple
OBJ_QEXP = 37                               # 37..40 exposed orientation incl. tilt (w,x,y,z)
OBJ_LEN = 41

# --- simulation parameter vector -----------------------------------------
PAR_GRID_N = 0
PAR_PITCH = 1
PAR_JOINT_RANGE = 2
PAR_MAX_SPEED = 3
PAR_SIM_DT = 4
PAR_SUBSTEPS = 5
PAR_GRAVITY = 6
PAR_FRICTION_MU = 7
PAR_CONTACT_TOL = 8
PAR_V_STICK = 9
PAR_TOPPLE_MARGIN = 10
PAR_TOPPLE_RATE = 11
PAR_LEN = 12

# --- control_step / settle status codes ----------------------------------
STATUS_OK = 0
STATUS_UNSUPPORTED = 1
STATUS_OUT_OF_BORDER = 2
