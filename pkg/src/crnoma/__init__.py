"""Joint antenna selection and power allocation for a two-user CR-NOMA downlink.

Core library (``channel``, ``noma``, ``selection``, ``analytic``,
``montecarlo``) plus a FastAPI service wrapper (``crnoma.service``) and a
thin CLI client (``crnoma.cli``).
"""

__version__ = "0.1.0"

from .channel import (  # noqa: F401
    ChannelRealization,
    ConfigurationError,
    LinkBudget,
    SystemConfig,
    derive_config,
    sample_channels,
    transmit_snr,
)
from .montecarlo import ExperimentPlan, OutageEstimate, run_plan, run_point  # noqa: F401
from .selection import SCHEME_IDS, SelectionOutcome  # noqa: F401
