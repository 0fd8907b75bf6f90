"""
Work ledger of a measurement-feedback cycle.

Three sub-processes, each bounded by the second law with information:

    measurement   W_meas  >= dF_Y + T I(X:M)    (memory Y records the outcome)
    feedback      W_fb    >= dF   - T I(X:M)    (controller acts on the outcome)
    reset         W_reset >= -dF_Y              (memory returned to its start)

For a cyclic system (dF = 0) the bounds add up to W_tot >= 0: whatever the
feedback gains from the correlations is paid back by measurement and reset.
Saturating every bound gives W_tot = 0; sub-process slack only adds to it.
"""

from dataclasses import asdict, dataclass
from typing import Any

from src.common.errors import DomainError, InvariantError
from src.feedback.measurement import MeasurementModel
from src.info_core.types import INVARIANT_TOL, ProbDist


@dataclass(frozen=True)
class FeedbackLedger:
    """Works in energy units, i_xm in nats."""

    w_meas: float
    w_fb: float
    w_reset: float
    w_tot: float
    i_xm: float
    delta_f_y: float
    delta_f: float
    temperature: float

    def __post_init__(self) -> None:
        total = self.w_meas + self.w_fb + self.w_reset
        if abs(self.w_tot - total) > INVARIANT_TOL:
            raise InvariantError(f"w_tot {self.w_tot!r} != sum of sub-process works {total!r}")
        if self.i_xm < -INVARIANT_TOL:
            raise InvariantError(f"negative mutual information {self.i_xm!r}")

    @property
    def second_law_margin(self) -> float:
        """W_tot - dF; non-negative for any admissible cycle."""
        return self.w_tot - self.delta_f

    @property
    def extracted(self) -> float:
        """Work delivered by the feedback step."""
        return -self.w_fb

    def to_json(self) -> dict[str, Any]:
        payload: dict[str, Any] = asdict(self)
        payload["second_law_margin"] = self.second_law_margin
        return payload


def feedback_bound(delta_f: float, i_xm: float, temperature: float) -> float:
    """Least admissible feedback work dF - T I(X:M)."""
    return delta_f - temperature * i_xm


def szilard_cycle_ledger(
    meas: MeasurementModel,
    delta_f_y: float,
    temperature: float,
    prior: ProbDist | None = None,
    slack: tuple[float, float, float] = (0.0, 0.0, 0.0),
) -> FeedbackLedger:
    """
    Ledger of a cyclic measure / feedback / reset sequence.

    Args:
        meas: Measurement channel p(m|x)
        delta_f_y: Free-energy change of the memory when it records the outcome
        temperature: Bath temperature
        prior: System distribution before measuring (uniform by default)
        slack: Non-negative excess work of (measurement, feedback, reset)

    Returns:
        FeedbackLedger; w_tot equals the total slack, so 0 at saturation
    """
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    if any(s < 0 for s in slack):
        raise DomainError(f"sub-process slack must be non-negative, got {slack!r}")
    if prior is None:
        prior = ProbDist.uniform(meas.n_states)
    meas.check_non_disturbance(prior)

    i_xm = max(meas.mutual_information(prior), 0.0)
    gain = temperature * i_xm
    s_meas, s_fb, s_reset = slack
    w_meas = delta_f_y + gain + s_meas
    w_fb = feedback_bound(0.0, i_xm, temperature) + s_fb
    w_reset = -delta_f_y + s_reset
    return FeedbackLedger(
        w_meas=w_meas,
        w_fb=w_fb,
        w_reset=w_reset,
        w_tot=w_meas + w_fb + w_reset,
        i_xm=i_xm,
        delta_f_y=delta_f_y,
        delta_f=0.0,
        temperature=temperature,
    )


def bennett_ledger(meas: MeasurementModel, temperature: float, prior: ProbDist | None = None) -> FeedbackLedger:
    """Measurement is free (dF_Y = -T I); the whole cost sits in the memory reset."""
    if prior is None:
        prior = ProbDist.uniform(meas.n_states)
    i_xm = max(meas.mutual_information(prior), 0.0)
    return szilard_cycle_ledger(meas, -temperature * i_xm, temperature, prior)
