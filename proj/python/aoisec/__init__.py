"""Secrecy age of information under a randomized transmission policy.

Closed forms, a truncated-chain numerical oracle, a seeded Monte Carlo
simulator and the sweep runners behind the ``aoisec`` command line tool.
"""

from ._core import *  # noqa: F401,F403
from ._core import (
    ChannelParams,
    Experiment,
    OutageConvention,
    Policy,
    SweepSpec,
    run_experiment,
)

__version__ = "0.1.0"


def run(experiment: str, **overrides) -> "SweepResult":  # noqa: F821
    """Run a sweep by name ("fig1", "fig2", "compare", "optimize").

    Keyword overrides are assigned onto ``SweepSpec.defaults(experiment)``;
    ``convention`` also accepts "paper" or "strict".
    """
    spec = SweepSpec.defaults(getattr(Experiment, experiment.upper()))
    for key, value in overrides.items():
        if key == "convention" and isinstance(value, str):
            value = {"paper": OutageConvention.PAPER_PRINTED,
                     "strict": OutageConvention.STRICT_DEFINITION}[value]
        if not hasattr(spec, key):
            raise AttributeError(f"SweepSpec has no field {key!r}")
        setattr(spec, key, value)
    return run_experiment(spec)


__all__ = [name for name in dir() if not name.startswith("_")]
