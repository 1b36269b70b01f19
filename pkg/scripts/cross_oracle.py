"""Fock-space traces against the closed-form lattice sums as the oscillator
degree grows.  Prints the error and the trace's own tail estimate per depth."""

from dataclasses import dataclass

from _config import parse_config
from onepoint.fock import phi_fock
from onepoint.theta1pt import ALPHA, ONE, PairJK, phi


@dataclass
class Config:
    """Closed form vs Fock trace convergence."""
    tau: complex = 0.1 + 0.6j
    u: complex = 0.3 + 0.1j
    w: float = 0.2
    depths: str = "2,4,6,8,12,16"


def main(cfg: Config):
    jk = PairJK(cfg.u, cfg.w)
    depths = [int(d) for d in cfg.depths.split(",")]
    print(f"tau = {cfg.tau}, (u, w) = ({cfg.u}, {cfg.w})")
    print(f"{'j':>2} {'v':>5} " + " ".join(f"{'d=' + str(d):>17}" for d in depths))
    for j in range(4):
        for name, v in (("1", ONE), ("alpha", ALPHA)):
            ref = phi(j, v, jk, cfg.tau)
            cells = []
            for d in depths:
                val, tail = phi_fock(j, v, jk, cfg.tau, d, return_tail=True)
                cells.append(f"{abs(val - ref):8.1e}/{tail:8.1e}")
            print(f"{j:>2} {name:>5} " + " ".join(cells))
    print("cells: |fock - closed| / tail estimate")


if __name__ == "__main__":
    main(parse_config(Config))
