"""
Gluing a trace over a cover
===========================

A chart covered by three opens with a polynomial partition of unity, one
gauge fermion per open, and the glued trace Z assembled from Lagrangian
families over every intersection.  Z vanishes on coboundaries and its
value on closed observables is unchanged when the nerve is truncated
later.
"""

from bvglue.bvcalc import DarbouxChart
from bvglue.descent import (CechModel, FlexibleLagrangian, TWCochain, closedness_residual,
                            trace_Z)
from bvglue.superpoly import Kind, Universe

U = Universe("glue")
U.declare_hbar()
lam = [U.gen(f"lam{i}", 1, 1, Kind.ODD_CONST) for i in (1, 2, 3)]
chart = DarbouxChart.create(U, [0, 0])
(x1, x2), (xi1, xi2) = chart.x, chart.xi

# the partition of unity need not be positive; only its sum matters here
pou = [1 - x1 - x2 ** 2, x1, x2 ** 2]

# one gauge fermion per open set; over an intersection the families
# interpolate linearly between them
psis = [lam[0] * x1 + lam[2] * x2, lam[1] * x1 * x2 + lam[2] * x2,
        lam[0] * x2 ** 2 - lam[1] * x1 + lam[2] * x2]

for K in (2, 3):
    model = CechModel(chart, pou, truncation=K)
    fams = FlexibleLagrangian(model, psis)

    # a closed observable, placed on every level of the nerve
    sigma = TWCochain.constant(model, 1 + x1 * x2)
    print(f"K={K}: Z(1 + x1 x2) =", trace_Z(sigma, model, fams).to_text())

    # the trace of a coboundary (delta + hbar Delta) tau is exactly zero
    tau = TWCochain.from_global(model, lam[0] * lam[1] * x1 * xi1)
    print(f"K={K}: Z of a coboundary =", closedness_residual(tau, model, fams).to_text())
