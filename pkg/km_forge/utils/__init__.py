from ._common import *
