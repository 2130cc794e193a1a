from .aligner import Aligner as Aligner
from .aligner import AlignmentResult as AlignmentResult
from .aligner import BoyerOutcome as BoyerOutcome
from .aligner import align as align
from .aligner import boyer_search as boyer_search
from .classical import classical_align as classical_align
from .const import VERSION
from .const import AutoKnown as AutoKnown
from .const import BoyerRandomized as BoyerRandomized
from .const import Diffusion as Diffusion
from .const import Fixed as Fixed
from .const import QueryConfig as QueryConfig
from .const import Schedule as Schedule
from .resources import estimate as estimate

__version__ = VERSION
