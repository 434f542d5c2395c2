"""Line plots of a run's series, written as reproducible SVG."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

PANELS = (
    ("energies", ("E_P", "E_K")),
    ("vorticity integral", ("vort_int",)),
    ("sup norms", ("u_inf", "grad_rho_inf")),
)


def plot_series(rows, path):
    plt.rcParams["svg.hashsalt"] = "boussinesq-lab"
    t = np.array([r.t for r in rows])
    fig, axes = plt.subplots(len(PANELS), 1, figsize=(6, 7), sharex=True)
    for ax, (title, cols) in zip(axes, PANELS):
        for c in cols:
            y = np.array([getattr(r, c) for r in rows], dtype=float)
            if np.any(np.isfinite(y)):
                ax.plot(t, y, label=c)
        ax.set_title(title, fontsize=9)
        ax.legend(fontsize=8)
    axes[-1].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
