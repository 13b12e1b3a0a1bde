"""Walk through the D=17 pipeline: prototypes, family, operators, series, mod p."""
from __future__ import annotations

from teichfuchs.charp import beta_n, cartier_pattern, p_curvature
from teichfuchs.families import discriminant_report, family
from teichfuchs.numring import PrimeContext
from teichfuchs.picardfuchs import derive_ode
from teichfuchs.series import holomorphic_solution, integrality_report
from teichfuchs.teich import component_label, enumerate_prototypes


def main() -> None:
    protos = enumerate_prototypes(17)
    print(f"{len(protos)} prototypes for D=17")
    for p in protos:
        print(f"  {p}  spin {component_label(p)}")

    fm = family(17, 1)
    print("discriminant exponents:", discriminant_report(fm).exponents)

    for i in (1, 2):
        L = derive_ode(fm, i)
        print(f"\nL{i}: A = {L.A}")
        print(f"     B = {L.B}")
        u = holomorphic_solution(L, 4)
        print("  u =", ", ".join(str(c) for c in u.coeffs))
        print("  2-integral to 80 terms:", integrality_report(L, {2, 17}, 80).ok)

    for p in (3, 5, 13):
        rep = cartier_pattern(fm, p)
        b = beta_n(fm, 1, PrimeContext(17, p, 1))
        pc = p_curvature(derive_ode(fm, 1), p)
        print(f"p={p}: cartier pattern {rep.holds}, beta_1={b.beta}, nilpotent={pc.nilpotent}")


if __name__ == "__main__":
    main()
