"""Free-group words, automorphisms, and the involution induced by an
orientation-reversing generator.

Words are tuples of signed 1-based generator indices, always freely reduced.
Automorphisms carry a certified inverse: construction runs a bounded Nielsen
reduction on the image tuple and refuses endomorphisms it cannot invert
within the budget.

The last section derives, for a signature, the action of conjugation by the
distinguished orientation-reversing element on a free basis of the
orientation-preserving half. The basis and the conjugation action are
computed by coset scanning over the two-element transversal, not transcribed
from any table; bundled reference patterns are provided separately for
diagnostics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .enumeration import Signature, validate_signature
from .errors import InvalidSignature, NotInvertibleMatrix, RankMismatch

# ---------------------------------------------------------------------------
# Words


def _reduce(letters) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if not isinstance(x, int) or x == 0:
            raise ValueError(f"letters must be nonzero ints, got {x!r}")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class FreeWord:
    """Freely reduced word; letters are nonzero ints, sign is the exponent."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    def __len__(self):
        return len(self.letters)

    def __repr__(self):
        return f"FreeWord({word_to_string(self) or '1'})"


EMPTY_WORD = FreeWord()


def word(*letters) -> FreeWord:
    return FreeWord(tuple(letters))


def word_multiply(u: FreeWord, v: FreeWord) -> FreeWord:
    return FreeWord(u.letters + v.letters)


def word_inverse(u: FreeWord) -> FreeWord:
    return FreeWord(tuple(-x for x in reversed(u.letters)))


def cyclic_reduce(w: FreeWord) -> tuple[FreeWord, FreeWord]:
    """Write w = u * core * u^-1 with core cyclically reduced; returns
    (core, u)."""
    letters = list(w.letters)
    prefix: list[int] = []
    while len(letters) >= 2 and letters[0] == -letters[-1]:
        prefix.append(letters[0])
        letters = letters[1:-1]
    return FreeWord(tuple(letters)), FreeWord(tuple(prefix))


_TOKEN = re.compile(r"^x(\d+)(\^-1)?$")


def word_from_string(text: str) -> FreeWord:
    """Parse the grammar `x<idx>[^-1]` with space-separated tokens."""
    letters = []
    for token in text.split():
        m = _TOKEN.match(token)
        if not m:
            raise ValueError(f"bad word token {token!r}")
        idx = int(m.group(1))
        if idx == 0:
            raise ValueError("generator indices start at 1")
        letters.append(-idx if m.group(2) else idx)
    return FreeWord(tuple(letters))


def word_to_string(w: FreeWord) -> str:
    return " ".join(f"x{x}" if x > 0 else f"x{-x}^-1" for x in w.letters)


# ---------------------------------------------------------------------------
# Automorphisms


def _abelianization(rank: int, images) -> list[list[int]]:
    m = [[0] * rank for _ in range(rank)]
    for j, w in enumerate(images):
        for x in w.letters:
            m[abs(x) - 1][j] += 1 if x > 0 else -1
    return m


def integer_determinant(matrix) -> int:
    """Exact determinant by fraction-free elimination."""
    m = [row[:] for row in matrix]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _substitute(images, w: FreeWord) -> FreeWord:
    parts: list[int] = []
    for x in w.letters:
        img = images[abs(x) - 1].letters
        parts.extend(img if x > 0 else tuple(-y for y in reversed(img)))
    return FreeWord(tuple(parts))


def _is_signed_basis(ws) -> bool:
    if any(len(w) != 1 for w in ws):
        return False
    seen = {abs(w.letters[0]) for w in ws}
    return seen == set(range(1, len(ws) + 1))


def _single_moves(ws):
    """All elementary moves on the tuple: (k, l, side, eps) meaning replace
    w_k by w_k * w_l^eps (side right) or w_l^eps * w_k (side left)."""
    n = len(ws)
    for k in range(n):
        for l in range(n):
            if k == l:
                continue
            for eps in (1, -1):
                yield k, l, "right", eps
                yield k, l, "left", eps


def _apply_move(ws, vs, move):
    k, l, side, eps = move
    w_l = ws[l] if eps == 1 else word_inverse(ws[l])
    v_l = vs[l] if eps == 1 else word_inverse(vs[l])
    ws = list(ws)
    vs = list(vs)
    if side == "right":
        ws[k] = word_multiply(ws[k], w_l)
        vs[k] = word_multiply(vs[k], v_l)
    else:
        ws[k] = word_multiply(w_l, ws[k])
        vs[k] = word_multiply(v_l, vs[k])
    return tuple(ws), tuple(vs)


def _invert_images(rank: int, images) -> tuple[FreeWord, ...]:
    """Nielsen-reduce the image tuple, mirroring every move on a formal
    tuple, and read the inverse off the resulting signed basis.

    Raises NotInvertibleMatrix when the abelianization is already singular
    over the integers or when the move budget runs out.
    """
    det = integer_determinant(_abelianization(rank, images))
    if det not in (1, -1):
        raise NotInvertibleMatrix(
            f"abelianized determinant is {det}, not a unit"
        )
    ws = tuple(images)
    vs = tuple(FreeWord((j,)) for j in range(1, rank + 1))
    if any(len(w) == 0 for w in ws):
        raise NotInvertibleMatrix("an image is the empty word")
    budget = 10 * sum(len(w) for w in ws) + 50
    plateau_cap = 400

    def best_reducing(ws_cur, vs_cur):
        for move in _single_moves(ws_cur):
            k = move[0]
            new_ws, new_vs = _apply_move(ws_cur, vs_cur, move)
            if len(new_ws[k]) < len(ws_cur[k]) and len(new_ws[k]) > 0:
                return new_ws, new_vs
        return None

    steps = 0
    while steps < budget:
        steps += 1
        if _is_signed_basis(ws):
            break
        improved = best_reducing(ws, vs)
        if improved is not None:
            ws, vs = improved
            continue
        # plateau: breadth-first over equal-length moves, looking for any
        # state that admits a strict reduction
        seen = {tuple(w.letters for w in ws)}
        frontier = [(ws, vs)]
        found = None
        explored = 0
        while frontier and found is None and explored < plateau_cap:
            cur_ws, cur_vs = frontier.pop(0)
            for move in _single_moves(cur_ws):
                k = move[0]
                nws, nvs = _apply_move(cur_ws, cur_vs, move)
                if len(nws[k]) != len(cur_ws[k]) or len(nws[k]) == 0:
                    continue
                key = tuple(w.letters for w in nws)
                if key in seen:
                    continue
                seen.add(key)
                explored += 1
                if best_reducing(nws, nvs) is not None or _is_signed_basis(nws):
                    found = (nws, nvs)
                    break
                frontier.append((nws, nvs))
        if found is None:
            raise NotInvertibleMatrix("inversion budget exhausted")
        ws, vs = found
    if not _is_signed_basis(ws):
        raise NotInvertibleMatrix("inversion budget exhausted")
    inverse_images = [EMPTY_WORD] * rank
    for w, v in zip(ws, vs):
        letter = w.letters[0]
        inverse_images[abs(letter) - 1] = v if letter > 0 else word_inverse(v)
    result = tuple(inverse_images)
    for j in range(1, rank + 1):
        if _substitute(images, result[j - 1]) != FreeWord((j,)):
            raise NotInvertibleMatrix("inverse verification failed")
    return result


@dataclass(frozen=True)
class FgAuto:
    """Automorphism of the rank-g free group, given by generator images.

    Construction certifies invertibility; the certified inverse rides along
    so composition and inversion stay cheap.
    """

    rank: int
    images: tuple[FreeWord, ...]
    inverse_images: tuple[FreeWord, ...] = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        if self.rank < 1:
            raise RankMismatch(f"rank must be positive, got {self.rank}")
        if len(self.images) != self.rank:
            raise RankMismatch(
                f"need {self.rank} images, got {len(self.images)}"
            )
        for w in self.images:
            for x in w.letters:
                if abs(x) > self.rank:
                    raise RankMismatch(
                        f"letter x{abs(x)} outside rank {self.rank}"
                    )
        if self.inverse_images is None:
            object.__setattr__(
                self, "inverse_images", _invert_images(self.rank, self.images)
            )
        else:
            for j in range(1, self.rank + 1):
                back = _substitute(self.images, self.inverse_images[j - 1])
                if back != FreeWord((j,)):
                    raise NotInvertibleMatrix(
                        "supplied inverse fails verification"
                    )

    def __call__(self, w: FreeWord) -> FreeWord:
        return auto_apply(self, w)


def identity_auto(rank: int) -> FgAuto:
    images = tuple(FreeWord((j,)) for j in range(1, rank + 1))
    return FgAuto(rank, images, images)


def auto_apply(phi: FgAuto, w: FreeWord) -> FreeWord:
    for x in w.letters:
        if abs(x) > phi.rank:
            raise RankMismatch(f"letter x{abs(x)} outside rank {phi.rank}")
    return _substitute(phi.images, w)


def auto_compose(phi: FgAuto, psi: FgAuto) -> FgAuto:
    """phi after psi."""
    if phi.rank != psi.rank:
        raise RankMismatch(f"ranks differ: {phi.rank} vs {psi.rank}")
    images = tuple(_substitute(phi.images, w) for w in psi.images)
    inverse = tuple(
        _substitute(psi.inverse_images, w) for w in phi.inverse_images
    )
    return FgAuto(phi.rank, images, inverse)


def auto_inverse(phi: FgAuto) -> FgAuto:
    return FgAuto(phi.rank, phi.inverse_images, phi.images)


def nielsen(k: int, g: int) -> FgAuto:
    """The four standard generators of the automorphism group: 1 swaps the
    first two generators, 2 cycles all of them, 3 inverts the first, 4 maps
    the first to the product of the first two."""
    if g < 2:
        raise RankMismatch(f"standard generators need rank >= 2, got {g}")
    basis = [FreeWord((j,)) for j in range(1, g + 1)]
    if k == 1:
        images = [basis[1], basis[0]] + basis[2:]
        return FgAuto(g, tuple(images), tuple(images))
    if k == 2:
        images = tuple(
            FreeWord((j % g + 1,)) for j in range(1, g + 1)
        )
        inverse = tuple(
            FreeWord(((j - 2) % g + 1,)) for j in range(1, g + 1)
        )
        return FgAuto(g, images, inverse)
    if k == 3:
        images = [word_inverse(basis[0])] + basis[1:]
        return FgAuto(g, tuple(images), tuple(images))
    if k == 4:
        images = [word(1, 2)] + basis[1:]
        inverse = [word(1, -2)] + basis[1:]
        return FgAuto(g, tuple(images), tuple(inverse))
    raise ValueError(f"generator index must be 1..4, got {k}")


def is_inner(phi: FgAuto):
    """Conjugator w with phi(x_j) = w x_j w^-1 for all j, or None.

    The first image pins the conjugator up to a power of x_1; the bounded
    power sweep plus full verification settles it.
    """
    core, u = cyclic_reduce(phi.images[0])
    if core != FreeWord((1,)):
        return None
    longest = max(len(w) for w in phi.images)
    for k in range(0, longest + 2):
        for sign in ((1,) if k == 0 else (1, -1)):
            w = word_multiply(u, FreeWord((sign,) * k))
            if all(
                phi.images[j - 1]
                == word_multiply(
                    w, word_multiply(FreeWord((j,)), word_inverse(w))
                )
                for j in range(1, phi.rank + 1)
            ):
                return w
    return None


def order_in_out(phi: FgAuto, max_order: int = 12):
    """Smallest n <= max_order with phi^n inner, or None."""
    power = phi
    for n in range(1, max_order + 1):
        if is_inner(power) is not None:
            return n
        power = auto_compose(phi, power)
    return None


def auto_to_json(phi: FgAuto) -> dict:
    return {
        "rank": phi.rank,
        "images": [word_to_string(w) for w in phi.images],
    }


def auto_from_json(data: dict) -> FgAuto:
    images = tuple(word_from_string(t) for t in data["images"])
    return FgAuto(int(data["rank"]), images)


def abelianize(phi: FgAuto) -> tuple[tuple[int, ...], ...]:
    """Integer matrix whose column j holds the exponent sums of the j-th
    image; determinant must be a unit or the input was never an
    automorphism."""
    m = _abelianization(phi.rank, phi.images)
    if integer_determinant(m) not in (1, -1):
        raise NotInvertibleMatrix("abelianized determinant is not a unit")
    return tuple(tuple(row) for row in m)


# ---------------------------------------------------------------------------
# Symbol words over the factor generators


@dataclass(frozen=True)
class Symbol:
    """Generator of one free factor: kind E (reflection), L (loxodromic),
    N (glide-reflection), F (real-factor reflection), A (real-factor
    loxodromic, indexed by factor and position)."""

    kind: str
    i: int
    k: int = 0

    @property
    def reversing(self):
        return self.kind in ("E", "N", "F")

    @property
    def involution(self):
        return self.kind in ("E", "F")

    def __repr__(self):
        if self.kind == "A":
            return f"A[{self.i},{self.k}]"
        return f"{self.kind}[{self.i}]"


@dataclass(frozen=True)
class SymbolWord:
    """Word over the factor generators, kept in rewriting-reduced form:
    involutions have exponent +1, adjacent inverse pairs cancel, and a
    real-factor reflection moves right past that factor's loxodromics."""

    letters: tuple[tuple[Symbol, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _rewrite(self.letters))

    def __len__(self):
        return len(self.letters)

    def __repr__(self):
        if not self.letters:
            return "SymbolWord(1)"
        parts = [
            f"{s!r}" + ("" if e == 1 else "^-1") for s, e in self.letters
        ]
        return f"SymbolWord({' '.join(parts)})"


def _rewrite(letters) -> tuple[tuple[Symbol, int], ...]:
    out = [
        (s, 1 if s.involution else e) for s, e in letters
    ]
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(out) - 1:
            (s1, e1), (s2, e2) = out[i], out[i + 1]
            if s1 == s2 and (s1.involution or e1 == -e2):
                del out[i : i + 2]
                changed = True
                i = max(i - 1, 0)
                continue
            if (
                s1.kind == "F"
                and s2.kind == "A"
                and s2.i == s1.i
            ):
                out[i], out[i + 1] = out[i + 1], out[i]
                changed = True
                continue
            i += 1
    return tuple(out)


def symbol_word(*letters) -> SymbolWord:
    return SymbolWord(tuple((s, e) for s, e in letters))


def symbol_word_inverse(w: SymbolWord) -> SymbolWord:
    return SymbolWord(tuple((s, -e) for s, e in reversed(w.letters)))


# ---------------------------------------------------------------------------
# The induced involution of a signature


def _case_of(s: Signature) -> int:
    if s.a + s.b > 0:
        return 1
    if s.e > 0:
        return 2
    return 3


def basis_symbols(s: Signature) -> list[SymbolWord]:
    """Free basis of the orientation-preserving half, as symbol words, in
    the order that defines the generator indexing."""
    g = validate_signature(s)
    if g < 1:
        raise InvalidSignature(f"{s} has rank 0; no basis to conjugate")
    A, c, d, e = s.a + s.b, s.c, s.d, s.e
    gammas = s.gammas
    E = [Symbol("E", i) for i in range(1, A + 1)]
    L = [Symbol("L", i) for i in range(1, c + 1)]
    N = [Symbol("N", i) for i in range(1, d + 1)]
    F = [Symbol("F", j) for j in range(1, e + 1)]
    Afac = {
        (j, k): Symbol("A", j, k)
        for j in range(1, e + 1)
        for k in range(1, gammas[j - 1] + 1)
    }
    out: list[SymbolWord] = []
    case = _case_of(s)
    if case == 1:
        r = E[0]
        for i in range(1, A):
            out.append(symbol_word((r, 1), (E[i], 1)))
        for x in L:
            out.append(symbol_word((x, 1)))
        for x in N:
            out.append(symbol_word((r, 1), (x, 1)))
        for x in L:
            out.append(symbol_word((r, 1), (x, 1), (r, 1)))
        for x in N:
            out.append(symbol_word((x, 1), (r, 1)))
        for j in range(1, e + 1):
            for k in range(1, gammas[j - 1] + 1):
                out.append(symbol_word((Afac[j, k], 1)))
        for f in F:
            out.append(symbol_word((r, 1), (f, 1)))
    elif case == 2:
        r = F[0]
        for j in range(1, e):
            out.append(symbol_word((r, 1), (F[j], 1)))
        for k in range(1, gammas[0] + 1):
            out.append(symbol_word((Afac[1, k], 1)))
        for x in L:
            out.append(symbol_word((x, 1)))
        for x in N:
            out.append(symbol_word((r, 1), (x, 1)))
        for x in L:
            out.append(symbol_word((r, 1), (x, 1), (r, 1)))
        for x in N:
            out.append(symbol_word((x, 1), (r, 1)))
        for j in range(2, e + 1):
            for k in range(1, gammas[j - 1] + 1):
                out.append(symbol_word((Afac[j, k], 1)))
    else:
        r = N[0]
        out.append(symbol_word((r, 1), (r, 1)))
        for x in L:
            out.append(symbol_word((x, 1)))
        for x in N[1:]:
            out.append(symbol_word((r, 1), (x, 1)))
        for x in L:
            out.append(symbol_word((r, 1), (x, 1), (r, -1)))
        for x in N[1:]:
            out.append(symbol_word((r, 1), (x, -1)))
    if len(out) != g:
        raise AssertionError(
            f"basis for {s} has {len(out)} entries, expected {g}"
        )
    return out


def _scan_tables(s: Signature):
    """The subgroup-rewriting data: transversal representative r and the map
    (coset, symbol) -> word in the basis generators."""
    A, c, d, e = s.a + s.b, s.c, s.d, s.e
    gammas = s.gammas
    B = c + d
    C = sum(gammas)
    case = _case_of(s)
    gamma_of: dict[tuple[str, int, int], FreeWord] = {}

    def put(sym: Symbol, at_one, at_r):
        gamma_of[("1", sym.kind, (sym.i, sym.k))] = at_one
        gamma_of[("r", sym.kind, (sym.i, sym.k))] = at_r

    if case == 1:
        r = Symbol("E", 1)
        put(r, EMPTY_WORD, EMPTY_WORD)
        for i in range(2, A + 1):
            put(Symbol("E", i), word(-(i - 1)), word(i - 1))
        for i in range(1, c + 1):
            put(Symbol("L", i), word(A + i - 1), word(A + B + i - 1))
        for i in range(1, d + 1):
            put(Symbol("N", i), word(A + B + c + i - 1), word(A + c + i - 1))
        off = 0
        for j in range(1, e + 1):
            fj = A + 2 * B + C + j - 1
            put(Symbol("F", j), word(-fj), word(fj))
            for k in range(1, gammas[j - 1] + 1):
                pos = A + 2 * B + off + k - 1
                put(Symbol("A", j, k), word(pos), word(fj, pos, -fj))
            off += gammas[j - 1]
    elif case == 2:
        r = Symbol("F", 1)
        put(r, EMPTY_WORD, EMPTY_WORD)
        base = e - 1 + gammas[0]
        for j in range(2, e + 1):
            put(Symbol("F", j), word(-(j - 1)), word(j - 1))
        for k in range(1, gammas[0] + 1):
            put(Symbol("A", 1, k), word(e - 1 + k), word(e - 1 + k))
        for i in range(1, c + 1):
            put(Symbol("L", i), word(base + i), word(base + B + i))
        for i in range(1, d + 1):
            put(Symbol("N", i), word(base + B + c + i), word(base + c + i))
        off = 0
        for j in range(2, e + 1):
            for k in range(1, gammas[j - 1] + 1):
                pos = base + 2 * B + off + k
                put(Symbol("A", j, k), word(pos), word(j - 1, pos, -(j - 1)))
            off += gammas[j - 1]
    else:
        r = Symbol("N", 1)
        put(r, EMPTY_WORD, word(1))
        for i in range(1, c + 1):
            put(Symbol("L", i), word(1 + i), word(c + d + i))
        for j in range(2, d + 1):
            put(Symbol("N", j), word(-(2 * c + d + j - 1)), word(c + j))
    return r, gamma_of


def _scan(r: Symbol, gamma_of, letters) -> FreeWord:
    """Reidemeister-Schreier scan of a symbol sequence starting at coset 1."""
    state = "1"
    out: list[int] = []
    for sym, exp in letters:
        if exp == 1:
            piece = gamma_of[(state, sym.kind, (sym.i, sym.k))]
            out.extend(piece.letters)
            if sym.reversing:
                state = "r" if state == "1" else "1"
        else:
            if sym.reversing:
                state = "r" if state == "1" else "1"
            piece = gamma_of[(state, sym.kind, (sym.i, sym.k))]
            out.extend(word_inverse(piece).letters)
    return FreeWord(tuple(out))


def rho_from_signature(s: Signature) -> FgAuto:
    """The involution induced on the free basis by conjugation with the
    distinguished orientation-reversing generator."""
    g = validate_signature(s)
    if g < 1:
        raise InvalidSignature(f"{s} has rank 0")
    basis = basis_symbols(s)
    r, gamma_of = _scan_tables(s)
    images = []
    for b in basis:
        conjugated = ((r, 1),) + b.letters + ((r, -1),)
        images.append(_scan(r, gamma_of, conjugated))
    return FgAuto(g, tuple(images))


def tabulated_rho_patterns(s: Signature) -> dict[int, FreeWord | None]:
    """Reference images per generator index from the bundled tables, used
    only for diagnostics.

    A None entry means the table gives no value there. The case with
    reflections present contains two lines whose index arithmetic does not
    type-check against the rank; they are reproduced as printed so that the
    diagnostics can show exactly where the derived action differs.
    """
    g = validate_signature(s)
    A, c, d, e = s.a + s.b, s.c, s.d, s.e
    B = c + d
    C = sum(s.gammas)
    expected: dict[int, FreeWord | None] = {j: None for j in range(1, g + 1)}
    case = _case_of(s)
    if case == 1:
        for j in range(1, A):
            expected[j] = word(-j)
        for j in range(A, A + B):
            target = j + B + 1
            expected[j] = word(target) if target <= g else None
        for j in range(A + 2 * B, A + 2 * B + C):
            target = j + A + 2 * B + C + 1
            expected[j] = word(target) if target <= g else None
        for j in range(A + 2 * B + C, A + 2 * B + C + e):
            expected[j] = word(-j)
    elif case == 2:
        y1 = s.gammas[0]
        for j in range(1, e):
            expected[j] = word(-j)
        for j in range(e, e + y1):
            expected[j] = word(j)
        for j in range(e + y1, e + y1 + B):
            expected[j] = word(j + B)
        for j in range(e + y1 + B, e + y1 + 2 * B):
            expected[j] = word(j - B)
        off = 0
        for jj in range(2, e + 1):
            for j in range(
                e + 2 * B + y1 + off, e + 2 * B + y1 + off + s.gammas[jj - 1]
            ):
                expected[j] = word(jj - 1, j, -(jj - 1))
            off += s.gammas[jj - 1]
    elif c == 0:
        expected[1] = word(1)
        for j in range(2, B + 1):
            expected[j] = word(1, -(B + j - 1))
        for j in range(B + 1, 2 * B):
            expected[j] = word(1, -(j - B + 1))
    return expected


def rho_diagnostics(s: Signature) -> dict:
    """Compare the derived involution with the bundled reference patterns.

    Returns per-index entries tagged match / differs / untabulated. Nothing
    here is asserted; the comparison is informational.
    """
    rho = rho_from_signature(s)
    expected = tabulated_rho_patterns(s)
    entries = []
    for j in range(1, rho.rank + 1):
        computed = rho.images[j - 1]
        ref = expected[j]
        if ref is None:
            status = "untabulated"
        elif ref == computed:
            status = "match"
        else:
            status = "differs"
        entries.append(
            {
                "index": j,
                "computed": word_to_string(computed),
                "tabulated": None if ref is None else word_to_string(ref),
                "status": status,
            }
        )
    return {
        "signature": str(s),
        "rank": rho.rank,
        "entries": entries,
        "disagreements": sum(1 for x in entries if x["status"] == "differs"),
    }
