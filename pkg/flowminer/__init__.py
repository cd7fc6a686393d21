__version__ = "0.4.0"

from .utils.logging import initialize as _initialize_logging
_initialize_logging()

from . import utils
from . import flows
from . import traces
from . import simulation
from . import slicing
from . import seq_model
from . import mining
from . import evaluation
from . import pipeline
