#!/usr/bin/env python3
"""Generate the shipped MZV reduction table.

Every admissible multiple zeta value of weight <= MAX_WEIGHT is reduced to
polynomials in pi-hat = 2*pi*i and the symbols z3, z5, z7, z3_5 using the
regularized double shuffle relations (finite double shuffle plus
x1 sh w - (1)*w).  The output is the TOML document read by
`MzvTable::load`.

Usage: python3 tools/gen_mzv_table.py > data/mzv_w8.toml
"""

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
import sys

MAX_WEIGHT = 8

# --- words and indices -----------------------------------------------------

def idx_to_word(idx):
    return "".join("A" * (s - 1) + "B" for s in idx)


def word_to_idx(w):
    out, run = [], 0
    for c in w:
        if c == "A":
            run += 1
        else:
            out.append(run + 1)
            run = 0
    assert run == 0
    return tuple(out)


def admissible_indices(weight):
    res = []

    def rec(rem, cur):
        if rem == 0:
            if cur and cur[0] >= 2:
                res.append(tuple(cur))
            return
        for s in range(1, rem + 1):
            rec(rem - s, cur + [s])

    rec(weight, [])
    return res


@lru_cache(maxsize=None)
def shuffle(u, v):
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    out = {}
    for w, c in shuffle(u[1:], v).items():
        out[u[0] + w] = out.get(u[0] + w, 0) + c
    for w, c in shuffle(u, v[1:]).items():
        out[v[0] + w] = out.get(v[0] + w, 0) + c
    return out


@lru_cache(maxsize=None)
def stuffle(u, v):
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    out = {}

    def add(d, head):
        for w, c in d.items():
            k = (head,) + w
            out[k] = out.get(k, 0) + c

    add(stuffle(u[1:], v), u[0])
    add(stuffle(u, v[1:]), v[0])
    add(stuffle(u[1:], v[1:]), u[0] + v[0])
    return out


# --- exact linear algebra --------------------------------------------------

def rref(rows, ncols):
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / Fraction(rows[r][c])
        rows[r] = [Fraction(x) * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def bernoulli(m):
    b = [Fraction(1)]
    for n in range(1, m + 1):
        s = sum(Fraction(factorial(n + 1), factorial(j) * factorial(n + 1 - j)) * b[j] for j in range(n))
        b.append(-s / (n + 1))
    return b[m]


def even_zeta_pi(s):
    # zeta(s) = -B_s / (2 s!) * (2 pi i)^s
    return -bernoulli(s) / (2 * factorial(s))


# --- reduction per weight --------------------------------------------------

# basis monomials: (pi_power, tuple of symbols) and their expression as a
# product of MZV indices (a list of factors whose stuffle product is taken)
SYMBOLS = [("z3", 3, (3,)), ("z5", 5, (5,)), ("z7", 7, (7,)), ("z3_5", 8, (3, 5))]


def monomials(weight):
    """All monomials pi^p * prod(symbols) of the given weight, p even."""
    res = []

    def rec(rem, start, syms):
        if rem % 2 == 0:
            res.append((rem, tuple(syms)))
        for i in range(start, len(SYMBOLS)):
            name, w, _ = SYMBOLS[i]
            if w <= rem:
                rec(rem - w, i, syms + [name])

    rec(weight, 0, [])
    return res


def stuffle_many(factors):
    acc = {(): Fraction(1)}
    for f in factors:
        nxt = {}
        for u, c in acc.items():
            for w, d in stuffle(u, f).items():
                nxt[w] = nxt.get(w, 0) + c * d
        acc = nxt
    return acc


def monomial_as_mzv(mono):
    """Expand a basis monomial into a rational combination of admissible MZVs."""
    p, syms = mono
    factors = []
    scale = Fraction(1)
    if p > 0:
        # pi^p = zeta(p) / even_zeta_pi(p)
        factors.append((p,))
        scale /= even_zeta_pi(p)
    sym_idx = {n: i for n, _, i in SYMBOLS}
    for s in syms:
        factors.append(sym_idx[s])
    return {k: scale * c for k, c in stuffle_many(factors).items()}


def reduce_weight(weight):
    words = admissible_indices(weight)
    col = {k: i for i, k in enumerate(words)}
    n = len(words)
    rels = []
    # finite double shuffle
    for wu in range(2, weight - 1):
        for u in admissible_indices(wu):
            for v in admissible_indices(weight - wu):
                row = [Fraction(0)] * n
                for w, c in shuffle(idx_to_word(u), idx_to_word(v)).items():
                    row[col[word_to_idx(w)]] += c
                for k, c in stuffle(u, v).items():
                    row[col[k]] -= c
                rels.append(row)
    # x1 sh w - (1) * w
    for u in admissible_indices(weight - 1):
        row = [Fraction(0)] * n
        for w, c in shuffle("B", idx_to_word(u)).items():
            k = word_to_idx(w)
            if k[0] == 1:
                continue
            row[col[k]] += c
        for k, c in stuffle((1,), u).items():
            if k[0] == 1:
                continue
            row[col[k]] -= c
        rels.append(row)
    mons = monomials(weight)
    # Solve, for every admissible k: e_k = sum_m c_m M_m  mod relations.
    # Unknown vector: columns [relations..., monomials...]; we instead reduce
    # modulo the relation space and express in the monomial images.
    R, piv = rref(rels, n) if rels else ([], [])
    def reduce(vec):
        vec = list(vec)
        for row, p in zip(R, piv):
            if vec[p] != 0:
                f = vec[p]
                vec = [a - f * b for a, b in zip(vec, row)]
        return vec
    dim = n - len(piv)
    mon_vecs = []
    for m in mons:
        v = [Fraction(0)] * n
        for k, c in monomial_as_mzv(m).items():
            v[col[k]] += c
        mon_vecs.append(reduce(v))
    if len(mons) != dim:
        raise SystemExit(f"weight {weight}: quotient dim {dim} != {len(mons)} monomials")
    free = [c for c in range(n) if c not in piv]
    # matrix M (dim x len(mons)) on free coordinates; invert
    M = [[mon_vecs[j][f] for j in range(len(mons))] for f in free]
    out = {}
    for k in words:
        e = [Fraction(0)] * n
        e[col[k]] = Fraction(1)
        e = reduce(e)
        rhs = [e[f] for f in free]
        aug = [M[i] + [rhs[i]] for i in range(dim)]
        red, pv = rref(aug, len(mons) + 1)
        if len(mons) in pv:
            raise SystemExit("inconsistent")
        sol = [Fraction(0)] * len(mons)
        for row, p in zip(red, pv):
            sol[p] = row[-1]
        out[k] = {m: c for m, c in zip(mons, sol) if c != 0}
    return out


def render(expr):
    if not expr:
        return "0"
    parts = []
    for (p, syms), c in sorted(expr.items(), key=lambda t: (t[0][0], t[0][1])):
        factors = []
        if p:
            factors.append("pi" if p == 1 else f"pi^{p}")
        counts = {}
        for s in syms:
            counts[s] = counts.get(s, 0) + 1
        for s in sorted(counts):
            factors.append(s if counts[s] == 1 else f"{s}^{counts[s]}")
        term = str(c) if not factors else ("*".join(factors) if c == 1 else
                                            "-" + "*".join(factors) if c == -1 else
                                            f"{c}*" + "*".join(factors))
        parts.append(term)
    s = " + ".join(parts)
    return s.replace("+ -", "- ")


def main():
    print("# Multiple zeta value reduction table.")
    print("# Generated by tools/gen_mzv_table.py from the regularized double")
    print("# shuffle relations. pi denotes 2*pi*i; words use A = dt/t, B = dt/(1-t).")
    print("version = 1")
    print(f"max_weight = {MAX_WEIGHT}")
    print()
    for name, w, _ in SYMBOLS:
        if w <= MAX_WEIGHT:
            print("[[symbols]]")
            print(f'name = "{name}"')
            print(f"weight = {w}")
            print()
    tables = {w: reduce_weight(w) for w in range(2, MAX_WEIGHT + 1)}
    print("[single_zeta]")
    for s in range(2, MAX_WEIGHT + 1):
        print(f'"{s}" = "{render(tables[s][(s,)])}"')
    print()
    print("[products]")
    print()
    print("[convergent_words]")
    for w in range(2, MAX_WEIGHT + 1):
        for k in sorted(tables[w], key=idx_to_word):
            print(f'{idx_to_word(k)} = "{render(tables[w][k])}"')
    sys.stderr.write("ok\n")


if __name__ == "__main__":
    main()
