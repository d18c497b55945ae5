"""SVG phase portraits of a compiled system"""
import logging
from typing import Iterable, Optional, Sequence

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .algebra import PlanarPoly  # noqa: E402
from .exception import MathDomainError  # noqa: E402
from .invariants import cofactor  # noqa: E402
from .numerics import NumericSystem, integrate  # noqa: E402
from .sysdef import PlanarSystem  # noqa: E402

logger = logging.getLogger(__name__)

VIEWPORT = 1.6
ORBIT_TIME = 40.0
ORBIT_SAMPLES = 2000


def unit_circle(names: Sequence[str] = ()) -> PlanarPoly:
    x, y = PlanarPoly.x(names), PlanarPoly.y(names)
    return x * x + y * y - 1


def has_invariant_circle(system: PlanarSystem) -> bool:
    try:
        return cofactor(system, unit_circle(system.params)).invariant
    except MathDomainError:
        return False


def default_starts(cycles: Iterable = ()) -> list:
    starts = [(x, 0.0) for x in (0.3, 0.7, 1.3)]
    starts += [(c.x_cross, 0.0) for c in cycles]
    return starts


def draw_portrait(system: NumericSystem, path: str, starts: Optional[Sequence] = None, cycles: Iterable = (),
                  t_max: float = ORBIT_TIME, tol: Optional[float] = None):
    cycles = list(cycles)
    starts = default_starts(cycles) if starts is None else starts
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.set_xlim(-VIEWPORT, VIEWPORT)
    ax.set_ylim(-VIEWPORT, VIEWPORT)
    ax.set_aspect("equal")
    ax.axhline(0.0, color="0.85", linewidth=0.5)
    ax.axvline(0.0, color="0.85", linewidth=0.5)

    if system.system is not None and has_invariant_circle(system.system):
        t = np.linspace(0.0, 2 * np.pi, 400)
        ax.plot(np.cos(t), np.sin(t), color="tab:red", linestyle="--", linewidth=1.0, label="x^2+y^2=1")

    for x0 in starts:
        try:
            trajectory = integrate(system, x0, t_max, tol)
        except MathDomainError as ex:
            logger.warning("orbit from (%g, %g) not drawn: %s", x0[0], x0[1], ex)
            continue
        samples = trajectory.sample(ORBIT_SAMPLES)
        ax.plot(samples[:, 1], samples[:, 2], linewidth=0.8)
    for cycle in cycles:
        ax.plot([cycle.x_cross], [0.0], marker="o", color="black", markersize=3)

    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc="upper right")
    # deterministic SVG output
    with matplotlib.rc_context({"svg.hashsalt": "cyclelab", "svg.fonttype": "none"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info("portrait written to %s", path)
