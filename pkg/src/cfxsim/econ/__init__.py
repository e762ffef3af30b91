from .model import *  # noqa
from .io import REVENUE_HEADER, params_from_dict, write_revenue_csv  # noqa: E402,F401
