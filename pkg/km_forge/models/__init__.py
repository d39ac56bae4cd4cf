from .base import *
from .algebra import *
from .terms import *
from .density import *
from .enrichment import *
from .omega import *
from .stone import *
from .suites import *
from .config import *
