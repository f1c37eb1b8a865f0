"""Morphism complexes between type-D structures and their composition.

The basis of Mor(N1, N2) is the set of basic morphisms (u, a, v): u a
generator of N1, v of N2, a a basis element with left idempotent I(u) and
right idempotent I(v).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..strands import AlgebraElement, CircleMismatch, StrandTerm
from .gf2 import ChainComplexF2, Homology, NotACycle, homology, solve
from .typed import ChainMismatch, TypeDMorphism, TypeDStructure, _xor_into


class NonIdempotentEvaluation(ValueError):
    pass


def _same_circle(N1: TypeDStructure, N2: TypeDStructure):
    if N1.circle != N2.circle:
        raise CircleMismatch(f"{N1.name or 'N1'} and {N2.name or 'N2'} live over different circles")


def mor_basis(N1: TypeDStructure, N2: TypeDStructure) -> list[tuple[str, StrandTerm, str]]:
    _same_circle(N1, N2)
    alg = N1.algebra
    table = alg.basis_by_idempotents
    out = []
    for u, iu in N1.generators:
        for v, iv in N2.generators:
            for a in sorted(table.get((iu, iv), []), key=lambda t: t.sort_key()):
                out.append((u, a, v))
    return out


@dataclass
class MorComplex:
    source: TypeDStructure
    target: TypeDStructure
    complex: ChainComplexF2

    @property
    def basis(self) -> list[tuple[str, StrandTerm, str]]:
        return self.complex.labels

    def vector(self, f: TypeDMorphism) -> int:
        return self.complex.vector(f.entries)

    def morphism(self, vec: int) -> TypeDMorphism:
        return TypeDMorphism(self.source, self.target, frozenset(self.complex.labels_of(vec)))

    def D(self, f: TypeDMorphism) -> TypeDMorphism:
        return self.morphism(self.complex.d(self.vector(f)))


def differential_of(f: TypeDMorphism) -> TypeDMorphism:
    """D(f) = mu2(I (x) f) delta1_N1 + mu2(I (x) delta1_N2) f + (mu1 (x) I) f."""
    N1, N2 = f.source, f.target
    alg = N1.algebra
    d1, d2 = N1.delta_terms(), N2.delta_terms()
    into_u: dict[str, list] = {u: [] for u in N1.names}
    for x in N1.names:
        for b, u in d1[x]:
            into_u[u].append((x, b))
    acc: dict = {}
    for u, a, v in f.entries:
        for x, b in into_u[u]:
            for t in alg.multiply_terms(b, a):
                _xor_into(acc, (x, t, v))
        for c, w in d2[v]:
            for t in alg.multiply_terms(a, c):
                _xor_into(acc, (u, t, w))
        for t in alg.differential_term(a):
            _xor_into(acc, (u, t, v))
    return TypeDMorphism(N1, N2, frozenset(acc))


def mor_complex(N1: TypeDStructure, N2: TypeDStructure) -> MorComplex:
    basis = mor_basis(N1, N2)
    C = ChainComplexF2(basis, [])
    cols = []
    for e in basis:
        df = differential_of(TypeDMorphism(N1, N2, frozenset([e])))
        cols.append(C.vector(df.entries))
    C.columns = cols
    if not C.squares_to_zero():
        raise ChainMismatch("Mor differential does not square to zero; check the structure equations")
    return MorComplex(N1, N2, C)


def box_tensor_complex(N1: TypeDStructure, N2: TypeDStructure) -> ChainComplexF2:
    """The complex on (u-bar, a, v) built through the dual of N1.

    The dual reverses every arrow of delta1: an entry x -> b (x) u of N1
    becomes u-bar -> x-bar with coefficient b acting on the left. The
    boundary of u-bar (x) a (x) v sums x-bar (x) ba (x) v over the dual
    arrows, u-bar (x) da (x) v, and u-bar (x) ac (x) w over delta1 of N2.
    """
    _same_circle(N1, N2)
    alg = N1.algebra
    dual: dict[str, list[tuple[AlgebraElement, str]]] = {u: [] for u in N1.names}
    for x in N1.names:
        for w, coeff in N1.delta_of(x).items():
            dual[w].append((coeff, x))
    target = {v: N2.delta_of(v) for v in N2.names}
    labels = mor_basis(N1, N2)
    index = {lab: i for i, lab in enumerate(labels)}
    cols = []
    for ubar, a, v in labels:
        elem = alg.element([a])
        out = 0
        for coeff, xbar in dual[ubar]:
            for t in coeff * elem:
                out ^= 1 << index[(xbar, t, v)]
        for t in alg.element(alg.differential_term(a)):
            out ^= 1 << index[(ubar, t, v)]
        for w, coeff in target[v].items():
            for t in elem * coeff:
                out ^= 1 << index[(ubar, t, w)]
        cols.append(out)
    return ChainComplexF2(labels, cols, index)


# -- composition ------------------------------------------------------------

def _chainable(f: TypeDMorphism, g: TypeDMorphism):
    if f.target is not g.source and f.target.to_json() != g.source.to_json():
        raise ChainMismatch("target of f is not the source of g")


def compose(f: TypeDMorphism, g: TypeDMorphism) -> TypeDMorphism:
    """g after f: (u, r, v) and (v, s, w) give (u, rs, w)."""
    _chainable(f, g)
    alg = f.source.algebra
    by_src: dict[str, list] = {}
    for v, s, w in g.entries:
        by_src.setdefault(v, []).append((s, w))
    acc: dict = {}
    for u, r, v in f.entries:
        for s, w in by_src.get(v, ()):
            for t in alg.multiply_terms(r, s):
                _xor_into(acc, (u, t, w))
    return TypeDMorphism(f.source, g.target, frozenset(acc))


def evaluation(f_target: TypeDStructure, vbar: str, v: str) -> AlgebraElement:
    """The pairing of a dual generator with a generator."""
    alg = f_target.algebra
    if vbar != v:
        return alg.zero()
    return alg.idempotent(f_target.idem[v])


def compose_via_evaluation(f: TypeDMorphism, g: TypeDMorphism) -> TypeDMorphism:
    """Evaluate the middle pair, collapse the idempotent, then multiply."""
    _chainable(f, g)
    alg = f.source.algebra
    mid = f.target
    acc: dict = {}
    for u, r, v in f.entries:
        for vbar_name, s, w in g.entries:
            ev = evaluation(mid, v, vbar_name)
            if not ev:
                continue
            if not ev.is_idempotent:
                raise NonIdempotentEvaluation(f"evaluation of {v} on {vbar_name} gave {ev!r}")
            collapsed = alg.element([r]) * ev
            for t in collapsed * alg.element([s]):
                _xor_into(acc, (u, t, w))
    return TypeDMorphism(f.source, g.target, frozenset(acc))


def _double(name: str, copy: int) -> str:
    return f"{name}^{copy}"


def _nearest(name: str) -> str:
    base, copy = name.rsplit("^", 1)
    return _double(base, 1 - int(copy))


def g_at_map(f: TypeDMorphism, g: TypeDMorphism) -> TypeDMorphism:
    """r . vbar1(u1) . s over the doubled generators.

    f's target generator u is read as u^0, carried to u^1 by the nearest
    point map, and paired with g's source generator v^1.
    """
    _chainable(f, g)
    alg = f.source.algebra
    mid = f.target
    acc: dict = {}
    for u, r, u0 in f.entries:
        u1 = _nearest(_double(u0, 0))
        for v, s, w in g.entries:
            v1 = _double(v, 1)
            pairing = alg.idempotent(mid.idem[v]) if v1 == u1 else alg.zero()
            for t in alg.element([r]) * pairing * alg.element([s]):
                _xor_into(acc, (u, t, w))
    return TypeDMorphism(f.source, g.target, frozenset(acc))


# -- homology-level operations ------------------------------------------------

def mor_homology(M: MorComplex) -> Homology:
    return homology(M.complex)


def basic_label(entry: tuple[str, StrandTerm, str]) -> str:
    u, a, v = entry
    return f"{u} -> {a!r} {v}"


def yoneda_product(M12: MorComplex, f: TypeDMorphism, M23: MorComplex, g: TypeDMorphism, M13: MorComplex,
                   H13: Homology | None = None) -> TypeDMorphism:
    """Class of g after f, given as the canonical representative."""
    for M, h in ((M12, f), (M23, g)):
        if M.complex.d(M.vector(h)):
            raise NotACycle(f"{h!r} is not a cycle")
    H13 = H13 or homology(M13.complex)
    prod = compose(f, g)
    return M13.morphism(H13.normal_form(M13.vector(prod)))


def is_homotopic(M: MorComplex, f: TypeDMorphism, g: TypeDMorphism) -> TypeDMorphism | None:
    """Some h with D(h) = f + g, or None."""
    for h in (f, g):
        if h.source is not M.source and h.source.to_json() != M.source.to_json():
            raise ChainMismatch("morphism does not belong to this complex")
    x = solve(M.complex.columns, M.vector(f + g))
    if x is None:
        return None
    return M.morphism(x)


def zero_morphism(N1: TypeDStructure, N2: TypeDStructure) -> TypeDMorphism:
    return TypeDMorphism(N1, N2, frozenset())


def basis_morphisms(M: MorComplex) -> list[TypeDMorphism]:
    return [M.morphism(1 << i) for i in range(M.complex.dim)]

