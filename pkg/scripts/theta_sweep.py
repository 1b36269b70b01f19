"""Sweep tau over a box and record theta / theta' law residuals for both the
derived multipliers and the printed variants.  Writes long-form CSV."""

import csv
import sys
from dataclasses import dataclass

import numpy as np

from _config import parse_config
from onepoint.modular import SECTION4_CHECKS, verify_section4


@dataclass
class Config:
    """Theta-law residual sweep."""
    nx: int = 5
    ny: int = 4
    re_min: float = -0.5
    re_max: float = 0.5
    im_min: float = 0.7
    im_max: float = 1.6
    z: complex = 0.15 + 0.1j
    out: str = ""


def main(cfg: Config):
    sink = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    wr = csv.writer(sink)
    wr.writerow(["which", "h", "k", "form", "tau_re", "tau_im", "abs_err"])
    worst = {}
    for x in np.linspace(cfg.re_min, cfg.re_max, cfg.nx):
        for y in np.linspace(cfg.im_min, cfg.im_max, cfg.ny):
            tau = complex(x, y)
            for which in SECTION4_CHECKS:
                for h in (0, 1):
                    for k in (0, 1):
                        for form in ("derived", "printed"):
                            err = verify_section4(h, k, which, tau, cfg.z, form=form).abs_err
                            wr.writerow([which, h, k, form, f"{x:.4f}", f"{y:.4f}", f"{err:.3e}"])
                            key = (which, h, k, form)
                            worst[key] = max(worst.get(key, 0.0), err)
    if cfg.out:
        sink.close()
    for key, err in sorted(worst.items()):
        print(*key, f"{err:.2e}", file=sys.stderr)


if __name__ == "__main__":
    main(parse_config(Config))
