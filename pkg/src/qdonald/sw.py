"""q-series realizations of the three modular Seiberg-Witten families.

The families are the rational elliptic surfaces underlying the monopole
counts nf = 0, 2, 3, each expanded at its cusp of Kodaira type I*_(4-nf).
All pi and sqrt(2) factors are absorbed into fixed normalizations so the
whole module stays in rational arithmetic: ``omega2`` stores (omega/pi)^2
and the Weierstrass data g2, g3, Delta are the u-polynomials of the family
evaluated on the u-series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import forms
from .series import InsufficientPrecision, QSeries


class UnsupportedFamily(ValueError):
    pass


@dataclass(frozen=True)
class SWFamily:
    nf: int
    u: QSeries
    omega2: QSeries          # (omega/pi)^2
    g2n: QSeries
    g3n: QSeries
    deltan: QSeries
    kodaira_infty: str


@dataclass(frozen=True)
class ContactTerm:
    nf: int
    t_series: QSeries
    vanishing_threshold: Fraction  # T = O(u^-1): all exponents below are zero


def _theta_set(prec):
    return (forms.vartheta(2, prec), forms.vartheta(3, prec),
            forms.vartheta(4, prec))


def sw_family(nf: int, prec) -> SWFamily:
    """Build u, (omega/pi)^2 and the Weierstrass series for one family."""
    p = Fraction(prec)
    if nf == 0:
        t2, t3, _ = _theta_set(p + 2)
        u = Fraction(1, 2) * (t2 ** 4 + t3 ** 4) * ((t2 * t3) ** 2).inverse()
        omega2 = 2 * (t2 * t3) ** 2
        g2 = u ** 2 / 12 - Fraction(1, 16)
        g3 = u ** 3 / 216 - u / 192
        delta = (u ** 2 - 1) / 4096
    elif nf == 2:
        base = sw_family(0, p / 2 + 1)
        u = base.u.rescale(2, 1).truncate(p)
        omega2 = base.omega2.rescale(2, 1).truncate(p)
        g2 = u ** 2 / 12 + Fraction(1, 4)
        g3 = u ** 3 / 216 - u / 24
        delta = (u ** 2 - 1) ** 2 / 64
    elif nf == 3:
        # Expansion at the I*_1 cusp: the u- and omega-columns of the family
        # table live in the nf=0 frame; transporting them through the
        # inversion swaps theta_2 <-> theta_4 and leaves a phase on omega
        # that makes the normalized square negative.  The sign is pinned by
        # T = O(1/u) and the Picard-Fuchs check below.
        _, t3, t4 = _theta_set(p + 4)
        s = t3 ** 2 - t4 ** 2
        u = -4 * (t3 * t4) ** 2 * (s ** 2).inverse() - Fraction(1, 2)
        omega2 = -(s ** 2) / 4
        g2 = u ** 2 / 12 - 5 * u / 4 + Fraction(11, 16)
        g3 = u ** 3 / 216 + 7 * u ** 2 / 48 - 29 * u / 96 + Fraction(7, 64)
        delta = Fraction(-1, 512) * (2 * u - 1) * (2 * u + 1) ** 4
    else:
        raise UnsupportedFamily(f"no massless modular family for nf={nf}")
    return SWFamily(nf=nf, u=u.truncate(p), omega2=omega2.truncate(p),
                    g2n=g2, g3n=g3, deltan=delta,
                    kodaira_infty=f"I*_{4 - nf}")


def u3_from_u0(prec) -> QSeries:
    """The table relation u3 = -2/(u0 - 1) - 1/2 applied to the u0 series.

    This is the expansion of the nf=3 coordinate at the nf=0 cusp; it equals
    the theta realization of sw_family(3) with theta_2 and theta_4 exchanged.
    """
    p = Fraction(prec)
    u0 = sw_family(0, p + 2).u
    return (-2 * (u0 - 1).inverse() - Fraction(1, 2)).truncate(p)


def weierstrass_residual(fam: SWFamily) -> QSeries:
    """g2^3 - 27 g3^2 - Delta; identically zero for a consistent family."""
    return fam.g2n ** 3 - 27 * fam.g3n ** 2 - fam.deltan


def delta_eta_residual(fam: SWFamily) -> QSeries:
    """Delta * (omega/pi)^12 - eta^24, expanded in the family's variable."""
    lhs = fam.deltan * fam.omega2 ** 6
    prec = lhs.prec_q()
    return lhs - forms.delta(prec)


def contact_term(fam: SWFamily) -> ContactTerm:
    """T = -E2/(3 (omega/pi)^2) + u/3 + delta_(3,nf)/2 as a rational series.

    The hatted two-observable differs from T only by the non-holomorphic
    completion of E2, so this series is exactly its holomorphic part.
    """
    prec = fam.omega2.prec_q()
    if prec is None or prec <= 1:
        raise InsufficientPrecision("family built to insufficient precision")
    e2 = forms.eisenstein_e2(prec + 2)
    t = -e2 * fam.omega2.inverse() / 3 + fam.u / 3
    if fam.nf == 3:
        t = t + Fraction(1, 2)
    threshold = -fam.u.valuation()
    return ContactTerm(nf=fam.nf, t_series=t, vanishing_threshold=threshold)


def periods_a(fam: SWFamily):
    """Normalized A-period data: returns (a_hat, W).

    W = (omega/pi)^2 and a_hat = (bold a)/(pi * omega/pi), so that the
    Picard-Fuchs relation d(bold a)/du = omega becomes the rational identity
    qdq(a_hat) * W + a_hat * qdq(W)/2 = W * qdq(u).
    """
    nf = fam.nf
    e2 = forms.eisenstein_e2(fam.omega2.prec_q() + 2)
    a_hat = (Fraction(nf + 2, 3) * fam.u
             + Fraction(4 - nf, 3) * e2 * fam.omega2.inverse())
    if nf == 3:
        a_hat = a_hat - Fraction(1, 2)
    return a_hat, fam.omega2


def period_residual(fam: SWFamily) -> QSeries:
    """qdq(a_hat) W + a_hat qdq(W)/2 - W qdq(u); zero iff d(bold a)/du = omega."""
    a_hat, w = periods_a(fam)
    return a_hat.qdq(1) * w + a_hat * w.qdq(1) / 2 - w * fam.u.qdq(1)


def check_family(nf: int, prec) -> list:
    """Run the per-family identity suite; returns (name, ok, first_bad)."""
    fam = sw_family(nf, prec)
    results = []

    def record(name, series):
        bad = [e for e, c in series.terms()]
        results.append((name, not bad, bad[0] if bad else None))

    record("weierstrass g2^3-27g3^2=Delta", weierstrass_residual(fam))
    record("discriminant Delta*(omega/pi)^12=eta^24", delta_eta_residual(fam))
    ct = contact_term(fam)
    low = [e for e, c in ct.t_series.terms() if e < ct.vanishing_threshold]
    results.append(("contact term T=O(1/u)", not low, low[0] if low else None))
    record("picard-fuchs d(a)/du=omega", period_residual(fam))
    if nf == 3:
        c0 = fam.u.coeff(-1)
        results.append(("leading constant c0=-1/16", c0 == Fraction(-1, 16),
                        None if c0 == Fraction(-1, 16) else Fraction(-1)))
        swap = sw_family_swapped_u3(prec)
        record("u3 = -2/(u0-1) - 1/2", swap - u3_from_u0(prec))
    if nf == 2:
        u0 = sw_family(0, Fraction(prec) / 2 + 1).u.rescale(2, 1)
        record("u2 = u0 at tau/2", (fam.u - u0))
    return results


def sw_family_swapped_u3(prec) -> QSeries:
    """nf=3 u-series with theta_2 and theta_4 exchanged (the S-dual chart)."""
    p = Fraction(prec)
    t2, t3, _ = _theta_set(p + 4)
    s = t3 ** 2 - t2 ** 2
    return (-4 * (t3 * t2) ** 2 * (s ** 2).inverse() - Fraction(1, 2)).truncate(p)
