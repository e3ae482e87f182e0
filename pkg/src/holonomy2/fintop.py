"""Finite topological spaces, continuous partial maps, partial homeomorphisms.

A finite topology is determined by its minimal open neighbourhoods: a set
is open exactly when it contains the minimal open of each of its points.
Every family of sets that contains the empty set and the whole space and
is closed under pairwise union and intersection is the family of *all*
such sets for the preorder it induces, so storing the minimal opens loses
nothing.  Continuity and openness checks then reduce to pointwise
containments, and derived spaces (products, pullbacks, subspaces) never
need their open-set lattice materialised.
"""

from __future__ import annotations

import itertools


DEFAULT_POINT_CAP = 64

# guard for open-set materialisation; spaces past this only answer predicates
_MATERIALISE_LIMIT = 1 << 16


class TopologyError(ValueError):
    pass


def _canon(points):
    return frozenset(points)


class FiniteTopSpace:
    """A finite point set with an explicit topology.

    Canonical storage is the minimal-open table.  ``from_opens`` validates
    an extensional open family (empty set, whole set, pairwise closure)
    and reports the first violated pair; ``from_generators`` expands a
    subbase to its generated topology.
    """

    __slots__ = ("points", "_min", "_opens_cache")

    def __init__(self, points, min_opens):
        self.points = _canon(points)
        self._min = {p: frozenset(min_opens[p]) for p in self.points}
        self._opens_cache = None
        for p, m in self._min.items():
            if p not in m or not m <= self.points:
                raise TopologyError("bad minimal open for %r" % (p,))

    # -- constructors -------------------------------------------------

    @classmethod
    def from_opens(cls, points, opens, point_cap=DEFAULT_POINT_CAP):
        points = _canon(points)
        if point_cap is not None and len(points) > point_cap:
            raise TopologyError(
                "space has %d points, cap is %d" % (len(points), point_cap))
        family = [frozenset(o) for o in opens]
        fam_set = set(family)
        for o in family:
            if not o <= points:
                raise TopologyError("open set %s not within point set" % (sorted(o),))
        if frozenset() not in fam_set:
            raise TopologyError("empty set missing from opens")
        if points not in fam_set:
            raise TopologyError("full point set missing from opens")
        ordered = sorted(fam_set, key=lambda o: (len(o), sorted(map(str, o))))
        for a, b in itertools.combinations(ordered, 2):
            if a | b not in fam_set:
                raise TopologyError(
                    "opens not closed under union: %s, %s" % (sorted(map(str, a)), sorted(map(str, b))))
            if a & b not in fam_set:
                raise TopologyError(
                    "opens not closed under intersection: %s, %s" % (sorted(map(str, a)), sorted(map(str, b))))
        mins = {}
        for p in points:
            m = points
            for o in fam_set:
                if p in o:
                    m = m & o
            mins[p] = m
        space = cls(points, mins)
        space._opens_cache = fam_set
        return space

    @classmethod
    def from_generators(cls, points, generators, point_cap=DEFAULT_POINT_CAP):
        """Topology generated by an arbitrary subbase."""
        points = _canon(points)
        if point_cap is not None and len(points) > point_cap:
            raise TopologyError(
                "space has %d points, cap is %d" % (len(points), point_cap))
        gens = [frozenset(g) & points for g in generators]
        mins = {}
        for p in points:
            m = points
            for g in gens:
                if p in g:
                    m = m & g
            mins[p] = m
        return cls(points, mins)

    @classmethod
    def from_min_opens(cls, points, min_opens):
        """Internal constructor for derived spaces; skips the point cap."""
        return cls(points, min_opens)

    @classmethod
    def discrete(cls, points):
        return cls(points, {p: frozenset([p]) for p in points})

    @classmethod
    def indiscrete(cls, points):
        pts = _canon(points)
        return cls(pts, {p: pts for p in pts})

    # -- queries ------------------------------------------------------

    def minimal_open(self, p):
        if p not in self.points:
            raise TopologyError("unknown point %r" % (p,))
        return self._min[p]

    def is_open(self, subset):
        s = frozenset(subset)
        if not s <= self.points:
            raise TopologyError("subset %s not within point set" % (sorted(map(str, s)),))
        return all(self._min[p] <= s for p in s)

    def open_sets(self):
        """Materialise every open set (all down-sets of the preorder)."""
        if self._opens_cache is not None:
            return sorted(self._opens_cache, key=lambda o: (len(o), sorted(map(str, o))))
        # every open is a union of minimal opens, so close under union
        opens = {frozenset()}
        for p in sorted(self.points, key=str):
            m = self._min[p]
            opens |= {o | m for o in opens}
            if len(opens) > _MATERIALISE_LIMIT:
                raise TopologyError("too many open sets to materialise")
        self._opens_cache = opens
        return sorted(opens, key=lambda o: (len(o), sorted(map(str, o))))

    def min_neighbourhood(self, subset):
        """Smallest open set containing ``subset``."""
        out = frozenset()
        for p in subset:
            out |= self.minimal_open(p)
        return out

    def is_discrete(self):
        return all(len(m) == 1 for m in self._min.values())

    # -- derived spaces -----------------------------------------------

    def subspace(self, subset):
        s = frozenset(subset)
        if not s <= self.points:
            raise TopologyError("subspace points not within space")
        return FiniteTopSpace.from_min_opens(s, {p: self._min[p] & s for p in s})

    def product(self, other):
        pts = frozenset(itertools.product(self.points, other.points))
        mins = {(p, q): frozenset(itertools.product(self._min[p], other._min[q]))
                for (p, q) in pts}
        return FiniteTopSpace.from_min_opens(pts, mins)

    def __eq__(self, other):
        if not isinstance(other, FiniteTopSpace):
            return NotImplemented
        return self.points == other.points and self._min == other._min

    def __hash__(self):
        return hash((self.points, tuple(sorted(((str(k), tuple(sorted(map(str, v)))) for k, v in self._min.items())))))

    def __repr__(self):
        return "FiniteTopSpace(%d points)" % len(self.points)


def pullback_space(component_spaces, points, components):
    """Subspace of a product, without materialising the product.

    ``points`` are the admitted tuples-in-disguise, ``components(p)``
    returns the tuple of coordinates of ``p`` in the given spaces.
    """
    pts = frozenset(points)
    comp = {p: components(p) for p in pts}
    for p, c in comp.items():
        if len(c) != len(component_spaces):
            raise TopologyError("component arity mismatch for %r" % (p,))
    mins = {}
    for p in pts:
        cmins = [sp.minimal_open(x) for sp, x in zip(component_spaces, comp[p])]
        mins[p] = frozenset(q for q in pts
                            if all(x in m for x, m in zip(comp[q], cmins)))
    return FiniteTopSpace.from_min_opens(pts, mins)


class PartialMap:
    """A map defined on an (open) subset of a source space."""

    __slots__ = ("domain", "table")

    def __init__(self, table, domain=None):
        self.table = dict(table)
        self.domain = frozenset(self.table if domain is None else domain)
        if self.domain != frozenset(self.table):
            raise TopologyError("domain does not match table keys")

    def __call__(self, p):
        try:
            return self.table[p]
        except KeyError:
            raise TopologyError("point %r outside domain" % (p,)) from None

    def image(self):
        return frozenset(self.table.values())

    def is_injective(self):
        return len(self.image()) == len(self.domain)

    def inverse(self):
        if not self.is_injective():
            raise TopologyError("cannot invert a non-injective partial map")
        return PartialMap({v: k for k, v in self.table.items()})

    def restrict(self, subdomain):
        sub = frozenset(subdomain) & self.domain
        return PartialMap({p: self.table[p] for p in sub})

    def compose(self, other):
        """other after self, on the matched overlap."""
        dom = [p for p in self.domain if self.table[p] in other.domain]
        return PartialMap({p: other.table[self.table[p]] for p in dom})

    def __eq__(self, other):
        if not isinstance(other, PartialMap):
            return NotImplemented
        return self.table == other.table

    def __hash__(self):
        return hash(tuple(sorted(((str(k), str(v)) for k, v in self.table.items()))))

    def __repr__(self):
        items = ", ".join("%s->%s" % (k, v) for k, v in
                          sorted(self.table.items(), key=lambda kv: str(kv[0])))
        return "PartialMap({%s})" % items


def minimal_open(space, p):
    """Intersection of all opens containing ``p``; itself open."""
    return space.minimal_open(p)


def is_continuous(f, src, tgt):
    """Preimages of opens are open in the subspace topology of the domain.

    Over finite spaces this is equivalent to the pointwise condition
    f(min(p)) <= min(f(p)), which is what gets checked.
    """
    if not f.domain <= src.points:
        raise TopologyError("domain not within source space")
    if not src.is_open(f.domain):
        raise TopologyError("domain of partial map is not open")
    if not f.image() <= tgt.points:
        raise TopologyError("values leave the target space")
    for p in f.domain:
        fp = f.table[p]
        tmin = tgt.minimal_open(fp)
        # domain open, so min(p) stays inside it
        for q in src.minimal_open(p):
            if f.table[q] not in tmin:
                return False
    return True


def is_partial_homeomorphism(f, src, tgt):
    """Injective, open image, continuous both ways.  Returns (ok, reason)."""
    if not src.is_open(f.domain):
        return False, "domain-not-open"
    if not f.image() <= tgt.points:
        return False, "values-outside-target"
    if not f.is_injective():
        return False, "not-injective"
    if not tgt.is_open(f.image()):
        return False, "image-not-open"
    if not is_continuous(f, src, tgt):
        return False, "not-continuous"
    if not is_continuous(f.inverse(), tgt, src):
        return False, "inverse-not-continuous"
    return True, ""
