"""Abstract syntax for propositional and interval (QDDC) formulas.

All nodes are frozen dataclasses, so formulas hash structurally and can be
used directly as memoization keys by the compiler.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Tuple

COMPARISONS = ("<", "<=", "=", ">=", ">")


class QddcError(Exception):
    """Base class for formula-level errors."""


@dataclass(frozen=True)
class VarRegistry:
    """Ordered universe of propositional variables.

    The global order is inputs, then outputs, then witnesses.  Every automaton
    reads its variables in this order, which is what lets the game algorithms
    split a letter into an input part followed by an output part.
    """

    inputs: Tuple[str, ...] = ()
    outputs: Tuple[str, ...] = ()
    witnesses: Tuple[str, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "witnesses", tuple(self.witnesses))
        order = self.order
        if len(set(order)) != len(order):
            seen, dups = set(), []
            for v in order:
                if v in seen:
                    dups.append(v)
                seen.add(v)
            raise QddcError(f"duplicate variable names: {sorted(set(dups))}")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(order)})

    @property
    def order(self) -> Tuple[str, ...]:
        return self.inputs + self.outputs + self.witnesses

    def __contains__(self, name) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self._index)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise QddcError(f"unknown variable {name!r}") from None

    def sort(self, names) -> Tuple[str, ...]:
        """Return `names` deduplicated and sorted in registry order."""
        return tuple(sorted(set(names), key=self.index))

    def is_input(self, name: str) -> bool:
        return name in self.inputs

    def with_witnesses(self, names) -> "VarRegistry":
        new = [n for n in names if n not in self]
        if not new:
            return self
        return VarRegistry(self.inputs, self.outputs, self.witnesses + tuple(new))

    def fresh(self, stem: str) -> str:
        if stem not in self:
            return stem
        k = 1
        while f"{stem}{k}" in self:
            k += 1
        return f"{stem}{k}"


def merge_registries(a: VarRegistry, b: VarRegistry) -> VarRegistry:
    """Registry covering both `a` and `b`; one must extend the other."""
    if a is b or a == b:
        return a
    oa, ob = a.order, b.order
    if a.inputs == b.inputs and a.outputs == b.outputs:
        if ob[: len(oa)] == oa:
            return b
        if oa[: len(ob)] == ob:
            return a
    raise QddcError(f"incompatible variable registries: {oa} vs {ob}")


# -- propositional layer ---------------------------------------------------

class Prop:
    """Propositional formula evaluated at a single position."""

    def variables(self) -> frozenset:
        raise NotImplementedError


@dataclass(frozen=True)
class PTrue(Prop):
    def variables(self):
        return frozenset()

    def __str__(self):
        return "true"


@dataclass(frozen=True)
class PFalse(Prop):
    def variables(self):
        return frozenset()

    def __str__(self):
        return "false"


@dataclass(frozen=True)
class PVar(Prop):
    name: str

    def variables(self):
        return frozenset((self.name,))

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class PNot(Prop):
    arg: Prop

    def variables(self):
        return self.arg.variables()

    def __str__(self):
        return f"!{_pwrap(self.arg)}"


@dataclass(frozen=True)
class PAnd(Prop):
    left: Prop
    right: Prop

    def variables(self):
        return self.left.variables() | self.right.variables()

    def __str__(self):
        return f"({self.left} && {self.right})"


@dataclass(frozen=True)
class POr(Prop):
    left: Prop
    right: Prop

    def variables(self):
        return self.left.variables() | self.right.variables()

    def __str__(self):
        return f"({self.left} || {self.right})"


def _pwrap(p: Prop) -> str:
    s = str(p)
    return s if isinstance(p, (PVar, PTrue, PFalse, PNot)) or s.startswith("(") else f"({s})"


def p_implies(a: Prop, b: Prop) -> Prop:
    return POr(PNot(a), b)


def p_iff(a: Prop, b: Prop) -> Prop:
    return POr(PAnd(a, b), PAnd(PNot(a), PNot(b)))


def p_conj(items) -> Prop:
    items = list(items)
    if not items:
        return PTrue()
    out = items[0]
    for it in items[1:]:
        out = PAnd(out, it)
    return out


def p_disj(items) -> Prop:
    items = list(items)
    if not items:
        return PFalse()
    out = items[0]
    for it in items[1:]:
        out = POr(out, it)
    return out


def rename_prop(p: Prop, mapping: dict) -> Prop:
    if isinstance(p, PVar):
        return PVar(mapping.get(p.name, p.name))
    if isinstance(p, PNot):
        return PNot(rename_prop(p.arg, mapping))
    if isinstance(p, PAnd):
        return PAnd(rename_prop(p.left, mapping), rename_prop(p.right, mapping))
    if isinstance(p, POr):
        return POr(rename_prop(p.left, mapping), rename_prop(p.right, mapping))
    return p


# -- interval layer --------------------------------------------------------

class Formula:
    """QDDC formula, evaluated over an observation interval [b, e]."""

    def children(self) -> Tuple["Formula", ...]:
        return ()

    def props(self) -> Tuple[Prop, ...]:
        return ()

    def free_vars(self) -> frozenset:
        out = set()
        for p in self.props():
            out |= p.variables()
        for c in self.children():
            out |= c.free_vars()
        return frozenset(out)

    def walk(self) -> Iterator["Formula"]:
        yield self
        for c in self.children():
            yield from c.walk()


@dataclass(frozen=True)
class Point(Formula):
    """<phi>: point interval whose only position satisfies phi."""
    phi: Prop

    def props(self):
        return (self.phi,)

    def __str__(self):
        return f"<{self.phi}>"


@dataclass(frozen=True)
class Front(Formula):
    """[phi]: extended interval, phi at every position except the last."""
    phi: Prop

    def props(self):
        return (self.phi,)

    def __str__(self):
        return f"[{self.phi}]"


@dataclass(frozen=True)
class All(Formula):
    """[[phi]]: phi at every position of the interval."""
    phi: Prop

    def props(self):
        return (self.phi,)

    def __str__(self):
        return f"[[{self.phi}]]"


@dataclass(frozen=True)
class Unit(Formula):
    """{{phi}}: interval of length one whose first position satisfies phi."""
    phi: Prop

    def props(self):
        return (self.phi,)

    def __str__(self):
        return f"{{{{{self.phi}}}}}"


@dataclass(frozen=True)
class Univ(Formula):
    """Holds on every interval; `true` in chop position."""

    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Chop(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"({self.left} ^ {self.right})"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"!{_fwrap(self.arg)}"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"({self.left} && {self.right})"


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"({self.left} || {self.right})"


@dataclass(frozen=True)
class Ex(Formula):
    var: str
    body: Formula

    def children(self):
        return (self.body,)

    def free_vars(self):
        return self.body.free_vars() - {self.var}

    def __str__(self):
        return f"(ex {self.var}. {self.body})"


@dataclass(frozen=True)
class AllQ(Formula):
    var: str
    body: Formula

    def children(self):
        return (self.body,)

    def free_vars(self):
        return self.body.free_vars() - {self.var}

    def __str__(self):
        return f"(all {self.var}. {self.body})"


@dataclass(frozen=True)
class SlenCmp(Formula):
    op: str
    c: int

    def __post_init__(self):
        _check_cmp(self.op, self.c)

    def __str__(self):
        return f"slen {self.op} {self.c}"


@dataclass(frozen=True)
class ScountCmp(Formula):
    phi: Prop
    op: str
    c: int

    def __post_init__(self):
        _check_cmp(self.op, self.c)

    def props(self):
        return (self.phi,)

    def __str__(self):
        return f"scount {_pwrap(self.phi)} {self.op} {self.c}"


@dataclass(frozen=True)
class SdurCmp(Formula):
    phi: Prop
    op: str
    c: int

    def __post_init__(self):
        _check_cmp(self.op, self.c)

    def props(self):
        return (self.phi,)

    def __str__(self):
        return f"sdur {_pwrap(self.phi)} {self.op} {self.c}"


# derived constructs, kept as distinct nodes until rewrite_derived

@dataclass(frozen=True)
class Pt(Formula):
    def __str__(self):
        return "pt"


@dataclass(frozen=True)
class Ext(Formula):
    def __str__(self):
        return "ext"


@dataclass(frozen=True)
class Diamond(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"<>{_fwrap(self.arg)}"


@dataclass(frozen=True)
class Box(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"[]{_fwrap(self.arg)}"


@dataclass(frozen=True)
class Pref(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"pref({self.arg})"


@dataclass(frozen=True)
class EP(Formula):
    """EP(phi) = true ^ <phi>: phi holds at the last position."""
    phi: Prop

    def props(self):
        return (self.phi,)

    def __str__(self):
        return f"EP({self.phi})"


DERIVED = (Pt, Ext, Diamond, Box, Pref, EP)


def _fwrap(f: Formula) -> str:
    s = str(f)
    return s if s.startswith(("(", "<", "[", "{", "!")) or s in ("true", "pt", "ext") else f"({s})"


def _check_cmp(op, c):
    if op not in COMPARISONS:
        raise QddcError(f"bad comparison operator {op!r}")
    if not isinstance(c, int) or c < 0:
        raise QddcError(f"comparison constant must be a natural number, got {c!r}")


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Or(Not(a), b), Or(Not(b), a))


def conj(items) -> Formula:
    items = list(items)
    if not items:
        return Univ()
    out = items[0]
    for it in items[1:]:
        out = And(out, it)
    return out


def disj(items) -> Formula:
    items = list(items)
    if not items:
        return Not(Univ())
    out = items[0]
    for it in items[1:]:
        out = Or(out, it)
    return out


def compare(value: int, op: str, c: int) -> bool:
    if op == "<":
        return value < c
    if op == "<=":
        return value <= c
    if op == "=":
        return value == c
    if op == ">=":
        return value >= c
    return value > c


def rename(f: Formula, mapping: dict) -> Formula:
    """Rename free variables; bound variables are left alone."""
    if not mapping:
        return f
    if isinstance(f, (Point, Front, All, Unit, EP)):
        return type(f)(rename_prop(f.phi, mapping))
    if isinstance(f, (ScountCmp, SdurCmp)):
        return type(f)(rename_prop(f.phi, mapping), f.op, f.c)
    if isinstance(f, (Ex, AllQ)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, rename(f.body, inner))
    if isinstance(f, (Chop, And, Or)):
        return type(f)(rename(f.left, mapping), rename(f.right, mapping))
    if isinstance(f, (Not, Diamond, Box, Pref)):
        return type(f)(rename(f.arg, mapping))
    return f


def bound_vars(f: Formula) -> Tuple[str, ...]:
    """Quantified variable names in first-occurrence order."""
    out = []
    for node in f.walk():
        if isinstance(node, (Ex, AllQ)) and node.var not in out:
            out.append(node.var)
    return tuple(out)
