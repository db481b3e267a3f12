import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from zoprox.objects.errors import InvalidArgumentException
from zoprox.solvers.trace import RunTrace

logger = logging.getLogger(__name__)

DEFAULT_FALLBACK = "zo_svrg_coord"


@dataclass(frozen=True)
class SwitchDecision:
    switch: bool
    stage: int
    improvement: float
    threshold: Optional[float]
    fallback: str

    def as_event(self) -> dict:
        return {"event": "switch" if self.switch else "continue", "stage": self.stage,
                "improvement": self.improvement, "threshold": self.threshold,
                "fallback": self.fallback}


def switch_orchestrator(history: Union[RunTrace, Sequence[float]], threshold: Optional[float],
                        fallback: str = DEFAULT_FALLBACK) -> SwitchDecision:
    """Decide whether to hand the rest of the budget to ``fallback``.

    ``history`` is the objective after every stage so far, starting with the
    initial point, or a reduction trace holding them. Switches when the last
    improvement is strictly below ``threshold``; ``None`` never switches.
    """
    objectives = history.stage_objectives if isinstance(history, RunTrace) else list(history)
    if len(objectives) < 2:
        raise InvalidArgumentException(f"Need at least 2 stage objectives to decide, got {len(objectives)}")
    improvement = objectives[-2] - objectives[-1]
    switch = threshold is not None and improvement < threshold
    decision = SwitchDecision(switch, len(objectives) - 1, improvement, threshold, fallback)
    if switch:
        logger.info("stage %d improved by %.3e < %.3e, switching to %s",
                    decision.stage, improvement, threshold, fallback)
    return decision
