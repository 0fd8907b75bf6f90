"""
Ledger: the bookkeeping record of one system–bath process.

For a bath starting in its Gibbs state and a product initial state, the
heat given to the bath decomposes exactly as

    beta dQ_B = -dS_S + I(S:B) + S(sigma_B || gamma_B)

and entropy production Sigma := beta dQ_B + dS_S is the sum of the two
non-negative terms on the right. Every field is stored, and the equality
residual is recomputed on demand, so a Ledger can be checked anywhere it
travels (CSV row, JSON document, test assertion).
"""

from dataclasses import asdict, dataclass
from typing import Any

from src.common.errors import InvariantError

# Non-negativity slack for I and the bath relative entropy
NONNEG_TOL = 1e-10

# Sigma = beta dQ_B + dS_S
SIGMA_TOL = 1e-9

ROW_COLUMNS = (
    "delta_s_system",
    "heat_to_bath",
    "mutual_info",
    "rel_entropy_bath",
    "entropy_production",
    "residual",
)


@dataclass(frozen=True)
class Ledger:
    """Entropies in nats, heat in energy units, beta the bath inverse temperature."""

    delta_s_system: float
    delta_s_bath: float
    heat_to_bath: float
    mutual_info: float
    rel_entropy_bath: float
    entropy_production: float
    beta: float

    def __post_init__(self) -> None:
        if self.mutual_info < -NONNEG_TOL:
            raise InvariantError(f"negative mutual information {self.mutual_info!r}")
        if self.rel_entropy_bath < -NONNEG_TOL:
            raise InvariantError(f"negative bath relative entropy {self.rel_entropy_bath!r}")
        expected = self.beta * self.heat_to_bath + self.delta_s_system
        if abs(self.entropy_production - expected) > SIGMA_TOL:
            raise InvariantError(
                f"entropy production {self.entropy_production!r} != beta dQ_B + dS_S = {expected!r}"
            )

    @classmethod
    def zero(cls, beta: float) -> "Ledger":
        """Ledger of a process that does nothing."""
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, beta)

    @property
    def slack(self) -> float:
        """I + S(sigma_B || gamma_B): how far the heat sits above the Landauer minimum, in nats."""
        return self.mutual_info + self.rel_entropy_bath

    @property
    def residual(self) -> float:
        """|beta dQ_B + dS_S - I - S(sigma_B || gamma_B)|."""
        return abs(self.beta * self.heat_to_bath + self.delta_s_system - self.slack)

    @property
    def landauer_margin(self) -> float:
        """beta dQ_B + dS_S; non-negative whenever Landauer's bound holds."""
        return self.beta * self.heat_to_bath + self.delta_s_system

    def as_row(self) -> dict[str, float]:
        """One CSV row, columns as in ROW_COLUMNS."""
        return {
            "delta_s_system": self.delta_s_system,
            "heat_to_bath": self.heat_to_bath,
            "mutual_info": self.mutual_info,
            "rel_entropy_bath": self.rel_entropy_bath,
            "entropy_production": self.entropy_production,
            "residual": self.residual,
        }

    def to_json(self) -> dict[str, Any]:
        payload: dict[str, Any] = asdict(self)
        payload["slack"] = self.slack
        payload["residual"] = self.residual
        return payload
