#!/usr/bin/env python3
"""Smoke test for the ampcap_py extension module.

Build the cdylib first, then run this script:

    cargo build --release -p ampcap-py
    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO / "target" / "release" / "libampcap_py.so",
        REPO / "target" / "debug" / "libampcap_py.so",
        REPO / "target" / "release" / "libampcap_py.dylib",
        REPO / "target" / "debug" / "libampcap_py.dylib",
    ]
    built = next((c for c in candidates if c.exists()), None)
    if built is None:
        sys.exit("build the extension first: cargo build --release -p ampcap-py")
    tmp = Path(tempfile.mkdtemp(prefix="ampcap_py_"))
    shutil.copy(built, tmp / "ampcap_py.so")
    sys.path.insert(0, str(tmp))
    import ampcap_py

    return ampcap_py


def close(a, b, tol=1e-12):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    m = load_module()

    close(m.q_function(0.0), 0.5)
    close(m.q_function(2.0), 0.02275013194817921, 1e-15)
    close(m.std_normal_pdf(0.0), 0.3989422804014327, 1e-16)
    close(m.tail_moment(2.0), -0.016981405233659274, 1e-15)
    close(m.binary_entropy_nats(0.5), math.log(2.0), 1e-15)

    close(m.shannon_bound(1.0), 0.5 * math.log(2.0), 1e-15)
    close(m.mckellips_bound(1.0), 0.3947016891408742, 1e-13)

    bp = m.bound_point(1.0)
    close(bp.theorem_nats, 0.337096185690661, 1e-12)
    assert bp.regime == "LOW_P"
    assert bp.combined_nats == min(bp.theorem_nats, bp.shannon_nats)
    assert 0.0 < bp.sigma2 <= 1.0

    kl_c = m.kl_closed_form(0.5, 1.0, 0.4772, 0.9675)
    kl_q = m.kl_quadrature(0.5, 1.0, 0.4772, 0.9675)
    close(kl_c, 0.17846991200544768, 1e-13)
    close(kl_c, kl_q, 1e-8)

    assert m.tail_moment_gap(1.0, 0.3) >= 0.0
    close(m.eb_n0_db(2.0, 0.5), 10.0 * math.log10(2.0), 1e-12)

    est = m.capacity(0.5, 1e-6)
    assert est.converged
    assert est.value_nats <= bpoint_combined(m, 0.25) + 1e-6
    assert est.upper_nats - est.lower_nats <= 1e-6

    value, beta, sigma2, x_at_max = m.minmax_bound(1.0)
    assert value <= bp.theorem_nats + 1e-6
    assert 0.0 < beta < 1.0 and 0.0 < sigma2 <= 1.5

    for bad in (lambda: m.bound_point(-1.0), lambda: m.binary_entropy_nats(1.5)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("ampcap_py smoke test: OK")


def bpoint_combined(m, p_linear):
    return m.bound_point(p_linear).combined_nats


if __name__ == "__main__":
    main()
