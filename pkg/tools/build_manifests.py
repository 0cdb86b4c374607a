"""Regenerate the bundled field manifests.

The integral basis comes from enlarging Z[beta] one prime at a time; the fundamental unit is the unit of
smallest |log|sigma(x)|| found by complete short-vector enumeration, which
also proves it fundamental: every unit x with 1 < |sigma(x)| < |sigma(eps)|
would satisfy |x|^2 < |eps|^2 and would have been enumerated.

Usage: python3 tools/build_manifests.py [--out DIR]
"""
import argparse
import json
import math
from fractions import Fraction
from pathlib import Path

from itertools import product

from h0quartic import numfield

# name, coefficients c0..c4, table row (0 = not in the table), extra?
FIELDS = [
    ("f01", [9, 0, 0, -3, 1], 1),
    ("f02", [1, 1, 0, -1, 1], 2),
    ("f03", [20, 16, 0, 0, 1], 3),
    ("f04", [1, 1, 1, -1, 1], 4),
    ("f05", [1, 2, 0, -1, 1], 5),
    ("f06", [8, 8, 0, 0, 1], 6),
    ("f07", [1, 1, 3, -1, 1], 7),
    ("f08", [36, 0, 0, 0, 1], 8),
    ("f09", [1, 0, 4, 0, 1], 9),
    ("f10", [1, 1, 4, -1, 1], 10),
    ("f11", [1, 0, 4, -3, 1], 11),
    ("f12", [7, 0, 0, 0, 1], 12),
    ("f13", [5, 4, 0, 0, 1], 13),
    ("f14", [4, -2, -1, -1, 1], 14),
    ("f15", [20, 0, 0, 0, 1], 15),
    ("f16", [3, 0, 0, 0, 1], 16),
    ("f17", [5, -4, 0, -1, 1], 17),
    ("f18", [3, -6, 4, -1, 1], 18),
    ("f19", [135, 0, 0, 0, 1], 19),
    ("cx1", [1, -1, 0, 0, 1], 0),
    ("cx2", [1, -1, 1, 0, 1], 0),
]
EXTRA = [
    ("golden", [1, 0, 3, 0, 1]),  # Q(i, sqrt 5)
    ("silver", [1, 0, 0, 0, 1]),  # Q(zeta_8), |eps| = 1 + sqrt 2
    ("q5i", [5, 0, 0, 0, 1]),
]

TABLE_REGULATOR = {
    1: 0.5435, 2: 0.6330, 3: 0.7328, 4: 0.7672, 5: 0.8626, 6: 1.0613, 7: 1.1989,
    8: 1.3170, 9: 1.3170, 10: 1.4290, 11: 1.4608, 12: 1.4860, 13: 1.5286, 14: 1.5668,
    15: 1.6169, 16: 1.6629, 17: 1.6780, 18: 1.7366, 19: 1.7400,
}


def _power_mul(c, p, q):
    prod = [Fraction(0)] * 7
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            prod[i + j] += a * b
    for d in range(6, 3, -1):
        lead, prod[d] = prod[d], Fraction(0)
        for k in range(4):
            prod[d - 4 + k] -= lead * c[k]
    return prod[:4]


def _charpoly_integral(c, y):
    """Faddeev-LeVerrier on the multiplication-by-y matrix (power basis)."""
    cols = [_power_mul(c, y, [1 if i == j else 0 for i in range(4)]) for j in range(4)]
    A = [[cols[j][i] for j in range(4)] for i in range(4)]
    n = 4
    Mk = [[Fraction(0)] * n for _ in range(n)]
    coeff = Fraction(1)
    for k in range(1, n + 1):
        for i in range(n):
            Mk[i][i] += coeff
        AM = [[sum(A[i][t] * Mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeff = -sum(AM[i][i] for i in range(n)) / k
        if coeff.denominator != 1:
            return False
        Mk = AM
    return True


def _power_disc(c):
    """Discriminant of 1, b, b^2, b^3 as det(Tr(b^(i+j)))."""
    pw = [[Fraction(1), 0, 0, 0]]
    for _ in range(6):
        pw.append(_power_mul(c, pw[-1], [0, 1, 0, 0]))
    tr = [sum(_power_mul(c, p, [1 if i == j else 0 for i in range(4)])[j] for j in range(4)) for p in pw]
    return int(numfield._det_frac([[tr[i + j] for j in range(4)] for i in range(4)]))


def maximal_order(coeffs):
    """Enlarge Z[b] prime by prime: an order of index divisible by p in the
    maximal order contains an integral element of (1/p)O outside O."""
    disc = _power_disc(coeffs)
    basis = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    primes, n, p = [], abs(disc), 2
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1
    for p in primes:
        grown = True
        while grown and disc % (p * p) == 0:
            grown = False
            for a in product(range(p), repeat=4):
                k = max((i for i in range(4) if a[i]), default=None)
                if k is None or k == 0 or a[k] != 1:
                    continue
                y = [sum(a[i] * basis[i][t] for i in range(4)) / p for t in range(4)]
                if _charpoly_integral(coeffs, y):
                    basis[k] = y
                    disc //= p * p
                    grown = True
                    break
    return basis, abs(disc)


def smallest_unit(fd):
    bound = 12.0
    while True:
        units = numfield.find_unit_bruteforce(fd, bound)
        if units:
            em = numfield.embeddings(fd)
            best = None
            for u in units:
                a, _ = em.abs2(u)
                if a > 1 and (best is None or a < best[0] - 1e-12):
                    best = (a, u)
            return best[1], math.log(best[0])
        bound *= 2


def build(name, coeffs, row, omega_hint=None):
    basis, disc = maximal_order(coeffs)
    provisional = numfield.FieldDescriptor(
        name=name, poly=tuple(coeffs), integral_basis=tuple(tuple(r) for r in basis),
        unit=numfield.ONE, omega=2, disc_f=disc, disc_k=0, regulator_ref=0.0, table_row=row,
    )
    unit, reg = smallest_unit(provisional)
    omega = len(numfield.roots_of_unity(provisional, check=False))
    fd = numfield.FieldDescriptor(
        name=name, poly=tuple(coeffs), integral_basis=provisional.integral_basis, unit=unit,
        omega=omega, disc_f=disc, disc_k=0, regulator_ref=TABLE_REGULATOR.get(row, round(reg, 10)),
        table_row=row,
    )
    dk, _ = numfield.complex_quadratic_subfield(fd)
    d = numfield.descriptor_to_dict(fd)
    d["disc_k"] = dk
    d["regulator_computed"] = reg
    return d


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(numfield.data_dir() / "fields"))
    args = ap.parse_args()
    out = Path(args.out)
    (out / "extra").mkdir(parents=True, exist_ok=True)
    for name, coeffs, row in FIELDS:
        d = build(name, coeffs, row)
        (out / f"{name}.json").write_text(json.dumps(d, indent=1) + "\n")
        print(name, d["disc_f"], d["omega"], d["disc_k"], d["regulator_computed"])
    for name, coeffs in EXTRA:
        d = build(name, coeffs, None)
        (out / "extra" / f"{name}.json").write_text(json.dumps(d, indent=1) + "\n")
        print(name, d["disc_f"], d["omega"], d["disc_k"], d["regulator_computed"])


if __name__ == "__main__":
    main()
