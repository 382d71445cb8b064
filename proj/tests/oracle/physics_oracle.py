"""Arbitrary-precision reference values for the Casimir-Polder response
functions. Every quantity is evaluated straight from the defining integral
forms with mpmath Bessel functions and tanh-sinh quadrature, so it shares no
code path with the C++ implementation (which works with scaled ratio
recurrences and Gauss-Kronrod panels).

Output: tests/data/physics_oracle.txt, lines of the form
    <case> <component> <value>
"""
import functools
import pathlib
import sys

import mpmath as mp

mp.mp.dps = 20
PI = mp.pi


# The three component integrals share quadrature nodes and neighbouring
# orders share I_{m+-1}, K_{m+-1}, so memoize.
@functools.lru_cache(maxsize=None)
def I(m, x):
    return mp.besseli(m, x)


@functools.lru_cache(maxsize=None)
def K(m, x):
    return mp.besselk(m, x)


def dI(m, x):
    return (mp.besseli(m - 1, x) + mp.besseli(m + 1, x)) / 2 if m > 0 else mp.besseli(1, x)


def dK(m, x):
    return -(mp.besselk(m - 1, x) + mp.besselk(m + 1, x)) / 2 if m > 0 else -mp.besselk(1, x)


def kquad(f, d):
    pts = [0] + [mp.mpf(c) / d for c in ("0.05", "0.25", "1", "4", "16", "40")] + [mp.inf]
    return mp.quad(f, pts)


# ---------------------------------------------------------------- plane
def plane(d, E):
    d, E = mp.mpf(d), mp.mpf(E)
    perp = mp.quad(lambda t: mp.exp(-2 * d * E * t) / (1 + t * t) ** 2, [0, 1, 10, mp.inf])
    para = mp.quad(lambda t: mp.exp(-2 * d * E * t) / (1 + t * t) ** 2 * (1 - t * t) / (1 + t * t),
                   [0, 1, 10, mp.inf])
    return [perp / (2 * PI * d ** 3), para / (2 * PI * d ** 3), para / (2 * PI * d ** 3)]


# ---------------------------------------------------------------- wire
def wire_factors(E, k, mode):
    """Retardation brackets (sqrt(E^2+k^2)-E, E^2/sqrt(E^2+k^2)-E, k^2/sqrt(E^2+k^2)).
    mode 'limit' returns the coefficient of 1/E for E -> infinity."""
    if mode == "limit":
        return k * k / 2, -k * k / 2, k * k
    S = mp.sqrt(E * E + k * k)
    return S - E, E * E / S - E, k * k / S


def wire_summand(m, R, rho, E, mode="exact"):
    """Unweighted m-th summand of the three wire series (2/pi factor included)."""
    R, rho, E = mp.mpf(R), mp.mpf(rho), mp.mpf(E)
    d = rho - R

    def f_rho(k):
        a, b, _ = wire_factors(E, k, mode)
        t = a * I(m, k * R) / K(m, k * R) * dK(m, k * rho) ** 2
        if m:
            t += (m / (k * rho)) ** 2 * b * dI(m, k * R) / dK(m, k * R) * K(m, k * rho) ** 2
        return k * t

    def f_phi(k):
        a, b, _ = wire_factors(E, k, mode)
        t = b * dI(m, k * R) / dK(m, k * R) * dK(m, k * rho) ** 2
        if m:
            t += (m / (k * rho)) ** 2 * a * I(m, k * R) / K(m, k * R) * K(m, k * rho) ** 2
        return k * t

    def f_z(k):
        _, _, c = wire_factors(E, k, mode)
        return k * c * I(m, k * R) / K(m, k * R) * K(m, k * rho) ** 2

    return [2 / PI * kquad(f, d) for f in (f_rho, f_phi, f_z)]


def wire(R, rho, E, mode="exact", tol=mp.mpf("1e-16")):
    total = [mp.mpf(0)] * 3
    summands = []
    m = 0
    small = 0
    while True:
        s = wire_summand(m, R, rho, E, mode)
        summands.append(s)
        w = mp.mpf(1) / 2 if m == 0 else 1
        total = [t + w * v for t, v in zip(total, s)]
        if all(abs(v) <= tol * abs(t) for v, t in zip(s, total) if t != 0):
            small += 1
        else:
            small = 0
        if small >= 3:
            break
        m += 1
    return total, summands


def ratio(m, R, k):
    return I(m, k * R) / K(m, k * R)


def large_radius(R, rho):
    """E * Xi from the large-radius approximation, coefficient of 1/E."""
    R, rho = mp.mpf(R), mp.mpf(rho)
    d = rho - R
    q = R / rho

    def A(x):
        s, sR = mp.sqrt(1 + x * x), mp.sqrt(1 + x * x * q * q)
        return q ** 2 * ((1 + s) / (1 + sR)) ** 2 * mp.exp(2 * (sR - s))

    def F(x):
        a = A(x)
        return a * (a * a + 4 * a + 1) / (a - 1) ** 4

    xs = [0] + [mp.mpf(c) * rho / d for c in ("0.1", "0.5", "1", "3", "10", "30")] + [mp.inf]
    geo_rp = mp.quad(lambda x: x * (mp.sqrt(1 + x * x) + 1 / mp.sqrt(1 + x * x)) * F(x), xs)
    geo_z = mp.quad(lambda x: x ** 3 / mp.sqrt(1 + x * x) * F(x), xs)
    b_rho = kquad(lambda k: k ** 3 * ratio(0, R, k) * K(1, k * rho) ** 2, d)
    b_phi = kquad(lambda k: k ** 3 * ratio(1, R, k) * K(1, k * rho) ** 2, d)
    b_z = kquad(lambda k: k ** 3 * ratio(0, R, k) * K(0, k * rho) ** 2, d)
    return [
        (rho ** 4 * b_rho + geo_rp) / (2 * PI * rho ** 4),
        (rho ** 4 * b_phi + geo_rp) / (2 * PI * rho ** 4),
        (rho ** 4 * b_z + geo_z) / (PI * rho ** 4),
    ]


def small_radius(R, rho):
    R, rho = mp.mpf(R), mp.mpf(rho)
    d = rho - R
    d1 = lambda k: dI(1, k * R) / dK(1, k * R)
    r_rho = kquad(lambda k: k ** 3 * ratio(0, R, k) * K(1, k * rho) ** 2, d) \
        - 2 * kquad(lambda k: k / rho ** 2 * d1(k) * K(1, k * rho) ** 2, d)
    r_phi = kquad(lambda k: k * (k * k + 2 / rho ** 2) * ratio(1, R, k) * K(1, k * rho) ** 2, d) \
        - 2 * kquad(lambda k: k ** 3 * d1(k) * dK(1, k * rho) ** 2, d)
    r_z = kquad(lambda k: k ** 3 * ratio(0, R, k) * K(0, k * rho) ** 2, d)
    return [r_rho / (2 * PI), r_phi / (2 * PI), r_z / PI]


# ---------------------------------------------------------------- half-plane
def hp_brackets(t, phi):
    s, c = mp.sin(phi), mp.cos(phi)
    s2, s4 = s * s, s ** 4
    t2 = t * t
    w = 1 + t2
    den = (t2 + s2) ** 3
    br = (3 * t ** 4 + 6 * t2 + 4) / (t ** 4 * w ** mp.mpf(1.5)) - 4 / t ** 4 \
        + 4 / den * ((2 * t2 + 1) * s2 - t2) \
        + c / (w ** mp.mpf(1.5) * den) * ((2 + t2) * s4 + 2 * s2 * (3 * t ** 4 + 6 * t2 + 2) - t2 * (3 * t ** 4 + 6 * t2 + 4))
    bp = (3 * t ** 6 + 6 * t ** 4 + 10 * t2 + 4) / (t ** 4 * w ** mp.mpf(2.5)) - 4 / t ** 4 \
        + 4 / den * ((1 - 2 * t2) * s2 + t2) \
        + c / (w ** mp.mpf(2.5) * den) * ((2 - 2 * t2 - t ** 4) * s4 + 2 * s2 * (2 + 2 * t2 - 6 * t ** 4 - 3 * t ** 6)
                                          + t2 * (3 * t ** 6 + 6 * t ** 4 + 10 * t2 + 4))
    bz = (9 * t ** 4 + 10 * t2 + 4) / (t ** 4 * w ** mp.mpf(2.5)) - 4 / t ** 4 + 4 * (s2 - t2) / den \
        - c / (w ** mp.mpf(2.5) * den) * ((t2 - 2) * s4 + 2 * (t ** 4 - 4 * t2 - 2) * s2 + t2 * (9 * t ** 4 + 10 * t2 + 4))
    return [br, bp, bz]


def hp_bracket(j, t, phi):
    # The literal brackets cancel like 1/t^4 near t = 0; raise precision there.
    extra = int(max(0, -4 * mp.log10(t))) + 10 if t < 1 else 0
    with mp.extradps(extra):
        return +hp_brackets(mp.mpf(t), phi)[j]


def halfplane(rho, phi, E, weight=None):
    rho, phi, E = mp.mpf(rho), mp.mpf(phi), mp.mpf(E)
    s = abs(mp.sin(phi))
    pts = [0, s / 4, s, 4 * s, 1, 4, 16, mp.inf] if s > 0 else [0, 1, 4, 16, mp.inf]
    pts = sorted(set(pts))
    w = weight or (lambda t: 1)
    return [mp.quad(lambda t: w(t) * mp.exp(-2 * rho * E * t) * hp_bracket(j, t, phi), pts) / (16 * PI * rho ** 3)
            for j in range(3)]


def halfplane_nonretarded(rho, phi):
    rho, phi = mp.mpf(rho), mp.mpf(phi)
    s, c = mp.sin(phi), mp.cos(phi)
    p = 16 * PI * rho ** 3
    return [5 / (48 * PI * rho ** 3) + c / (p * s * s) + (PI - phi) * (1 + s * s) / (p * s ** 3),
            -1 / (48 * PI * rho ** 3) + c / (8 * PI * rho ** 3 * s * s) + (PI - phi) * (1 + c * c) / (p * s ** 3),
            1 / (24 * PI * rho ** 3) + c / (p * s * s) + (PI - phi) / (p * s ** 3)]


def force_direction(rho, phi, E):
    """Unit vector (F_rho, F_phi) of -grad of the isotropic shift
    U = -(Xi_rho + Xi_phi + Xi_z)/3. Derivatives taken under the integral."""
    rho, phi, E = mp.mpf(rho), mp.mpf(phi), mp.mpf(E)
    xi = halfplane(rho, phi, E)
    dxi_drho_int = halfplane(rho, phi, E, weight=lambda t: -2 * E * t)
    dxi_drho = [-3 / rho * a + b for a, b in zip(xi, dxi_drho_int)]
    s = abs(mp.sin(phi))
    pts = sorted(set([0, s / 4, s, 4 * s, 1, 4, 16, mp.inf]))

    def dphi(j):
        g = lambda t: mp.exp(-2 * rho * E * t) * mp.diff(lambda p: hp_bracket(j, t, p), phi)
        return mp.quad(g, pts) / (16 * PI * rho ** 3)

    dxi_dphi = [dphi(j) for j in range(3)]
    # U = -sum/3, F = -grad U = +grad(sum)/3
    f_rho = sum(dxi_drho) / 3
    f_phi = sum(dxi_dphi) / (3 * rho)
    n = mp.sqrt(f_rho ** 2 + f_phi ** 2)
    return [f_rho / n, f_phi / n]


def emit(lines, case, comps, names=("rho_comp", "phi_comp", "z_comp")):
    for n, v in zip(names, comps):
        lines.append(f"{case} {n} {mp.nstr(v, 20, min_fixed=1, max_fixed=0)}")
        print(lines[-1], flush=True)


def case_lines(case):
    """Oracle lines for one named case; cases run in separate processes."""
    lines = []
    if case == "plane":
        emit(lines, "plane_d1_E1", plane(1, 1))
    elif case.startswith("wire_E"):
        E = case[len("wire_E"):]
        total, summands = wire(1, 2, E)
        emit(lines, f"wire_R1_rho2_E{E}", total)
        if E == "1":
            for m, s in enumerate(summands):
                lines.append(f"wire_R1_rho2_E1_summand z_comp_m{m} {mp.nstr(s[2], 20, min_fixed=1, max_fixed=0)}")
    elif case == "wire_E0":
        emit(lines, "wire_R1_rho2_E0", wire(1, 2, 0)[0])
    elif case == "wire_limit":
        emit(lines, "wire_R1_rho2_retarded_limit", wire(1, 2, 0, mode="limit")[0])
    elif case == "large_radius":
        emit(lines, "wire_large_radius_R1_rho1.3", large_radius(1, "1.3"))
    elif case == "small_radius":
        emit(lines, "wire_small_radius_R1_rho50", small_radius(1, 50))
    elif case == "halfplane":
        emit(lines, "halfplane_rho1_phi2pi3_E1", halfplane(1, 2 * PI / 3, 1))
        emit(lines, "halfplane_rho1_phi_pi2_E0", halfplane(1, PI / 2, 0))
        emit(lines, "halfplane_nonretarded_rho1_phi_pi2", halfplane_nonretarded(1, PI / 2))
    elif case == "force":
        emit(lines, "halfplane_force_rho1_phi3pi4_E50", force_direction(1, 3 * PI / 4, 50), names=("f_rho", "f_phi"))
    return lines


CASES = ["plane", "wire_E0.1", "wire_E1", "wire_E10", "wire_E0", "wire_limit",
         "large_radius", "small_radius", "halfplane", "force"]


def main():
    results = []
    for case in CASES:
        results.append(case_lines(case))
        I.cache_clear()
        K.cache_clear()
    lines = ["# case component value  (mpmath reference, see tests/oracle/physics_oracle.py)"]
    for r in results:
        lines.extend(r)
    out = pathlib.Path(__file__).resolve().parents[1] / "data" / "physics_oracle.txt"
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out}", file=sys.stderr)


if __name__ == "__main__":
    main()
