"""Local linear sections, germs, and the holonomy groupoid of a windowed
double groupoid.

A local linear section assigns to each arrow of an open set of the edge
groupoid a square with that bottom edge, so that right edges factor
through the target map, the assignment is multiplicative on composable
pairs of non-identity arrows lying in the domain, and the induced top
map is a partial homeomorphism that is multiplicative in both
directions on such pairs.  Identity arrows carry no multiplicativity
constraint: this keeps single-square thickenings available through
every square, which the germ and holonomy constructions quantify over.

Germs are canonical: a section's germ at an arrow is its restriction to
the minimal open neighbourhood, so germ equality is decidable and
agrees with the usual some-neighbourhood definition.  The holonomy
groupoid is the quotient of the subgroupoid of germs generated by
window-valued sections by the normal subgroupoid of germs that evaluate
to an identity square, topologized by chart images of window opens.
"""

from __future__ import annotations

import itertools

from .fintop import FiniteTopSpace, PartialMap, TopologyError, is_continuous, is_partial_homeomorphism, pullback_space
from .groupoid import Groupoid, GroupoidMorphism, NormalSubgroupoid, _skey, check_groupoid, check_groupoid_morphism, generated_subgroupoid, quotient
from .xmod import apply_action
from .dgpd import build_double_groupoid


class HolonomyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# window structures
# ---------------------------------------------------------------------------


class WStructure:
    """A topologized subset of the kernel groupoid's arrows."""

    def __init__(self, arrows, space):
        self.arrows = frozenset(arrows)
        self.space = space
        if space.points != self.arrows:
            raise HolonomyError("window space points must equal the window arrows")

    def __repr__(self):
        return "WStructure(%d arrows)" % len(self.arrows)


def full_wstructure(cm, space=None):
    arrows = frozenset(cm.C.arrows)
    if space is None:
        space = FiniteTopSpace.discrete(arrows)
    return WStructure(arrows, space)


def check_wstructure(cm, w):
    """Violations: window inside C, contains identities, target map a
    continuous open surjection onto the object space."""
    out = []
    C = cm.C
    if not w.arrows <= set(C.arrows):
        out.append("window arrows not within C")
        return out
    for x in C.objects:
        if C.unit(x) not in w.arrows:
            out.append("identity at %s missing from window" % (x,))
    obj_space = cm.G.object_space()
    beta = PartialMap({c: C.tgt(c) for c in sorted(w.arrows, key=_skey)})
    if beta.image() != frozenset(C.objects):
        out.append("target map not surjective on objects")
    try:
        if not is_continuous(beta, w.space, obj_space):
            out.append("target map not continuous on window")
    except TopologyError as e:
        out.append("target map continuity: %s" % e)
    for o in w.space.open_sets():
        img = frozenset(C.tgt(c) for c in o)
        if not obj_space.is_open(img):
            out.append("target map not open: image of %s" % (sorted(map(str, o)),))
            break
    return out


class WGSquares:
    """A subset of squares with a topology; usually the squares whose
    inner arrow lies in a window, with the pullback topology."""

    def __init__(self, dg, squares, space):
        self.dg = dg
        self.squares = frozenset(squares)
        self.space = space
        if space.points != self.squares:
            raise HolonomyError("square window space points mismatch")
        self._by_bottom = {}
        for sq in sorted(self.squares, key=_skey):
            self._by_bottom.setdefault(sq.bottom, []).append(sq)

    def with_bottom(self, a):
        return tuple(self._by_bottom.get(a, ()))

    def __contains__(self, sq):
        return sq in self.squares

    def __repr__(self):
        return "WGSquares(%d squares)" % len(self.squares)


def build_wg(dg, w):
    """Squares with inner arrow in the window, with the pullback topology
    of (window space, edge space^3) along (inner, left, bottom, right)."""
    bad = check_wstructure(dg.cm, w)
    if bad:
        raise HolonomyError("invalid window: %s" % bad[0])
    squares = [sq for sq in dg.squares if sq.inner in w.arrows]
    arr_space = dg.edge.arrow_space()
    space = pullback_space([w.space, arr_space, arr_space, arr_space],
                           squares,
                           lambda sq: (sq.inner, sq.left, sq.bottom, sq.right))
    return WGSquares(dg, squares, space)


def square_subwindow(wg, squares):
    """Window on a subset of squares, with the subspace topology."""
    subset = frozenset(squares)
    return WGSquares(wg.dg, subset, wg.space.subspace(subset))


# ---------------------------------------------------------------------------
# local linear sections
# ---------------------------------------------------------------------------


class LocalLinearSection:
    """Square-valued section on an open arrow set, with its boundary data."""

    __slots__ = ("dom0", "dom1", "s0", "squares", "_key")

    def __init__(self, dom0, dom1, s0, squares):
        self.dom0 = frozenset(dom0)
        self.dom1 = frozenset(dom1)
        self.s0 = dict(s0)
        self.squares = dict(squares)
        self._key = (tuple(sorted(self.dom0, key=_skey)),
                     tuple(sorted(self.dom1, key=_skey)),
                     tuple(sorted(self.s0.items(), key=lambda kv: _skey(kv[0]))),
                     tuple(sorted(self.squares.items(), key=lambda kv: _skey(kv[0]))))

    def square(self, z):
        try:
            return self.squares[z]
        except KeyError:
            raise HolonomyError("arrow %s outside section domain" % (z,)) from None

    def top(self, z):
        return self.square(z).top

    def top_map(self):
        return PartialMap({z: sq.top for z, sq in self.squares.items()})

    def base_map(self):
        return PartialMap({x: self.s0[x] for x in self.dom0})

    def __eq__(self, other):
        if not isinstance(other, LocalLinearSection):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return "LocalLinearSection(|dom1|=%d)" % len(self.dom1)


def _feet(G, arrows):
    out = set()
    for z in arrows:
        out.add(G.src(z))
        out.add(G.tgt(z))
    return out


def _nonunit_pairs(G, dom):
    for u in dom:
        if G.is_unit(u):
            continue
        for v in dom:
            if G.is_unit(v) or not G.composable(u, v):
                continue
            if G.add(u, v) in dom:
                yield u, v


def check_local_section(dg, sec):
    """Violations of the local linear section conditions."""
    G = dg.edge
    AS, XS = G.arrow_space(), G.object_space()
    out = []
    if not AS.is_open(sec.dom1):
        out.append("arrow domain not open")
    if not XS.is_open(sec.dom0):
        out.append("object domain not open")
    if not _feet(G, sec.dom1) <= sec.dom0:
        out.append("feet of arrow domain leave object domain")
    if set(sec.s0) != set(sec.dom0):
        out.append("s0 not defined exactly on the object domain")
        return out
    if set(sec.squares) != set(sec.dom1):
        out.append("squares not defined exactly on the arrow domain")
        return out
    for x in sorted(sec.dom0, key=_skey):
        if G.tgt(sec.s0[x]) != x:
            out.append("s0 not a target section at %s" % (x,))
    for z in sorted(sec.dom1, key=_skey):
        sq = sec.squares[z]
        if not dg.contains(sq):
            out.append("value at %s is not a square of the double groupoid" % (z,))
            continue
        if sq.bottom != z:
            out.append("bottom edge wrong at %s" % (z,))
        if sq.right != sec.s0[G.tgt(z)]:
            out.append("right edge disagrees with s0 at %s" % (z,))
        # left edges must induce the same base deformation as s0
        if G.src(sq.left) != G.src(sec.s0[G.src(z)]):
            out.append("left edge base point disagrees with s0 at %s" % (z,))
    if out:
        return out
    for u, v in _nonunit_pairs(G, sec.dom1):
        try:
            rhs = dg.comp2(sec.squares[u], sec.squares[v])
        except Exception:
            out.append("linearity fails at (%s,%s): not composable" % (u, v))
            continue
        if rhs != sec.squares[G.add(u, v)]:
            out.append("linearity fails at (%s,%s)" % (u, v))
    f1 = sec.top_map()
    ok, reason = is_partial_homeomorphism(f1, AS, AS)
    if not ok:
        out.append("top map not a partial homeomorphism: %s" % reason)
    else:
        for u, v in _nonunit_pairs(G, sec.dom1):
            if f1.table[G.add(u, v)] != G.add(f1.table[u], f1.table[v]):
                out.append("top map not multiplicative at (%s,%s)" % (u, v))
        image = f1.image()
        inv = f1.inverse()
        for p, q in _nonunit_pairs(G, image):
            if inv.table[G.add(p, q)] != G.add(inv.table[p], inv.table[q]):
                out.append("inverse top map not multiplicative at (%s,%s)" % (p, q))
    f0 = sec.base_map()
    f0a = PartialMap({x: G.src(sec.s0[x]) for x in sec.dom0})
    ok, reason = is_partial_homeomorphism(f0a, XS, XS)
    if not ok:
        out.append("base deformation not a partial homeomorphism: %s" % reason)
    return out


def smoothness_violations(dg, wg, sec):
    """Window-valuedness plus continuity of s0 and of the square map."""
    G = dg.edge
    AS = G.arrow_space()
    out = []
    for z in sorted(sec.dom1, key=_skey):
        if sec.squares[z] not in wg:
            out.append("value at %s outside the window" % (z,))
    if out:
        return out
    if not is_continuous(sec.base_map(), G.object_space(), AS):
        out.append("s0 not continuous")
    sq_map = PartialMap(dict(sec.squares))
    if not is_continuous(sq_map, AS, wg.space):
        out.append("square map not continuous into the window")
    return out


def constant_section(dg, dom1, dom0=None):
    """Identity-square section: the unit for the section product."""
    G = dg.edge
    AS, XS = G.arrow_space(), G.object_space()
    dom1 = frozenset(dom1)
    if dom0 is None:
        dom0 = XS.min_neighbourhood(_feet(G, dom1))
    return LocalLinearSection(dom0, dom1,
                              {x: G.unit(x) for x in dom0},
                              {z: dg.eps1(z) for z in dom1})


def local_section_mul(dg, sec, tau, check=True):
    """(sec * tau)(z) = sec(top tau(z)) +1 tau(z) on the matched open domain."""
    G = dg.edge
    dom1 = frozenset(z for z in tau.dom1 if tau.squares[z].top in sec.dom1)
    f0 = {x: G.src(tau.s0[x]) for x in tau.dom0}
    dom0 = frozenset(x for x in tau.dom0 if f0[x] in sec.dom0)
    squares = {z: dg.comp1(sec.squares[tau.squares[z].top], tau.squares[z])
               for z in dom1}
    s0 = {x: G.add(sec.s0[f0[x]], tau.s0[x]) for x in dom0}
    out = LocalLinearSection(dom0, dom1, s0, squares)
    if check:
        bad = check_local_section(dg, out)
        if bad:
            raise HolonomyError("section product invalid: %s" % bad[0])
    return out


def local_section_inv(dg, sec, check=True):
    """sec^{-1}(z) = -1 sec(topmap^{-1}(z)), on the image domains."""
    G = dg.edge
    f1inv = sec.top_map().inverse()
    f0 = PartialMap({x: G.src(sec.s0[x]) for x in sec.dom0})
    f0inv = f0.inverse()
    dom1 = f1inv.domain
    dom0 = f0inv.domain
    squares = {z: dg.neg1(sec.squares[f1inv.table[z]]) for z in dom1}
    s0 = {x: G.neg(sec.s0[f0inv.table[x]]) for x in dom0}
    out = LocalLinearSection(dom0, dom1, s0, squares)
    if check:
        bad = check_local_section(dg, out)
        if bad:
            raise HolonomyError("section inverse invalid: %s" % bad[0])
    return out


def restrict_section(dg, sec, dom1, dom0=None):
    G = dg.edge
    XS = G.object_space()
    dom1 = frozenset(dom1) & sec.dom1
    if dom0 is None:
        dom0 = XS.min_neighbourhood(_feet(G, dom1))
    dom0 = frozenset(dom0) & sec.dom0
    return LocalLinearSection(dom0, dom1,
                              {x: sec.s0[x] for x in dom0},
                              {z: sec.squares[z] for z in dom1})


# ---------------------------------------------------------------------------
# germs
# ---------------------------------------------------------------------------


class Germ:
    """Restriction of a section to the minimal open of its base arrow."""

    __slots__ = ("base", "values", "_vm")

    def __init__(self, base, value_map):
        self.base = base
        self._vm = dict(value_map)
        if base not in self._vm:
            raise HolonomyError("germ base %s outside its value map" % (base,))
        self.values = tuple(sorted(self._vm.items(), key=lambda kv: _skey(kv[0])))

    def value_map(self):
        return dict(self._vm)

    def value(self):
        """The square at the base arrow (the final-map value)."""
        return self._vm[self.base]

    def source(self):
        return self._vm[self.base].top

    def target(self):
        return self.base

    def __eq__(self, other):
        if not isinstance(other, Germ):
            return NotImplemented
        return self.base == other.base and self.values == other.values

    def __hash__(self):
        return hash((self.base, self.values))

    def __str__(self):
        return "germ@%s:%s" % (self.base, ",".join("%s->%s" % (z, sq) for z, sq in self.values))

    def __repr__(self):
        return "Germ(base=%s, %d values)" % (self.base, len(self.values))


def germ_at(dg, sec, a):
    """Canonical germ of a section at an arrow of its domain."""
    if a not in sec.dom1:
        raise HolonomyError("arrow %s outside the section domain" % (a,))
    M = dg.edge.arrow_space().minimal_open(a)
    return Germ(a, {z: sec.squares[z] for z in M})


def germ_value(germ):
    """Evaluation at the base arrow: the morphism onto the vertical squares."""
    return germ.value()


def germs_equal_somewhere(dg, s, t, a):
    """Existential germ equivalence: agreement on some open neighbourhood.

    Quantifies over all open sets of the arrow space; the canonical test
    compares restrictions to the minimal open instead.
    """
    AS = dg.edge.arrow_space()
    if a not in s.dom1 or a not in t.dom1:
        raise HolonomyError("arrow %s outside a section domain" % (a,))
    for o in AS.open_sets():
        if a not in o or not (o <= s.dom1 and o <= t.dom1):
            continue
        if all(s.squares[z] == t.squares[z] for z in o):
            return True
    return False


def unit_germ(dg, a):
    M = dg.edge.arrow_space().minimal_open(a)
    return Germ(a, {z: dg.eps1(z) for z in M})


def germ_mul(dg, gb, ga):
    """[s]_{top ta} * [t]_a = [s*t]_a, computed on value maps."""
    if gb.base != ga.value().top:
        raise HolonomyError("germs not composable: %s vs %s" % (gb.base, ga.value().top))
    bvals = gb.value_map()
    avals = ga.value_map()
    out = {}
    for z, sq in avals.items():
        out[z] = dg.comp1(bvals[sq.top], sq)
    return Germ(ga.base, out)


def germ_inv(dg, g):
    vals = g.value_map()
    inv_top = {sq.top: z for z, sq in vals.items()}
    if len(inv_top) != len(vals):
        raise HolonomyError("germ top map not injective")
    out = {t: dg.neg1(vals[z]) for t, z in inv_top.items()}
    return Germ(g.value().top, out)


# ---------------------------------------------------------------------------
# enumeration of minimal-domain sections
# ---------------------------------------------------------------------------


def _complete_base_map(dg, dom0, pins, alpha_req, smooth):
    """Find s0 on dom0 extending the right-edge pins, respecting the base
    points required by left edges, making the base deformation a partial
    homeomorphism (and s0 continuous when smooth)."""
    G = dg.edge
    XS = G.object_space()
    AS = G.arrow_space()
    points = sorted(dom0, key=_skey)
    for x, arrow in pins.items():
        if x in alpha_req and G.src(arrow) != alpha_req[x]:
            return None
    free = [x for x in points if x not in pins]

    def finish(s0):
        f0 = PartialMap({x: G.src(s0[x]) for x in points})
        ok, _ = is_partial_homeomorphism(f0, XS, XS)
        if not ok:
            return None
        if smooth and not is_continuous(PartialMap(s0), XS, AS):
            return None
        return dict(s0)

    def extend(i, s0):
        if i == len(free):
            return finish(s0)
        x = free[i]
        for arrow in sorted(G.beta_fiber(x), key=_skey):
            if x in alpha_req and G.src(arrow) != alpha_req[x]:
                continue
            s0[x] = arrow
            got = extend(i + 1, s0)
            if got is not None:
                return got
            del s0[x]
        return None

    return extend(0, dict(pins))


def section_from_squares(dg, dom1, square_map, window=None, smooth=False):
    """Assemble and validate a section from a square assignment, completing
    the boundary data; None when no valid completion exists."""
    G = dg.edge
    XS = G.object_space()
    dom0 = XS.min_neighbourhood(_feet(G, dom1))
    pins = {}
    alpha_req = {}
    for z in dom1:
        t = G.tgt(z)
        r = square_map[z].right
        if pins.get(t, r) != r:
            return None
        pins[t] = r
        u = G.src(z)
        la = G.src(square_map[z].left)
        if alpha_req.get(u, la) != la:
            return None
        alpha_req[u] = la
    s0 = _complete_base_map(dg, dom0, pins, alpha_req, smooth)
    if s0 is None:
        return None
    sec = LocalLinearSection(dom0, dom1, s0, square_map)
    if check_local_section(dg, sec):
        return None
    if window is not None and smoothness_violations(dg, window, sec):
        return None
    return sec


def min_sections_at(dg, a, window=None, smooth=False, pin=None):
    """All sections whose arrow domain is the minimal open of ``a``.

    ``window`` restricts values (and, with ``smooth``, demands continuity
    into the window space); ``pin`` fixes chosen squares in advance.
    Restriction to minimal domains loses no germs: any section restricts
    to one of these with the same germ at ``a``.
    """
    G = dg.edge
    AS = G.arrow_space()
    M = sorted(AS.minimal_open(a), key=_skey)
    source = window if window is not None else dg
    candidates = {}
    for z in M:
        opts = list(source.with_bottom(z))
        if pin and z in pin:
            opts = [sq for sq in opts if sq == pin[z]]
        candidates[z] = opts

    results = []

    def consistent(assign):
        rights = {}
        lefts_at = {}
        tops = set()
        for z, sq in assign.items():
            t = G.tgt(z)
            if rights.get(t, sq.right) != sq.right:
                return False
            rights[t] = sq.right
            u = G.src(z)
            la = G.src(sq.left)
            if lefts_at.get(u, la) != la:
                return False
            lefts_at[u] = la
            tops.add(sq.top)
        for t, arrow in rights.items():
            if t in lefts_at and G.src(arrow) != lefts_at[t]:
                return False
        if len(tops) != len(assign):
            return False
        for u in assign:
            if G.is_unit(u):
                continue
            for v in assign:
                if G.is_unit(v) or not G.composable(u, v):
                    continue
                uv = G.add(u, v)
                if uv in assign:
                    if assign[u].right != assign[v].left:
                        return False
                    if dg.comp2(assign[u], assign[v]) != assign[uv]:
                        return False
        return True

    def extend(i, assign):
        if i == len(M):
            sec = section_from_squares(dg, frozenset(M), dict(assign),
                                       window=window, smooth=smooth)
            if sec is not None:
                results.append(sec)
            return
        z = M[i]
        for sq in candidates[z]:
            assign[z] = sq
            if consistent(assign):
                extend(i + 1, assign)
            del assign[z]

    extend(0, {})
    results.sort(key=lambda s: _skey(s._key))
    return results


def sections_through(dg, wg, w_square, smooth=True):
    """Window-valued sections through a square: value at its bottom is the square."""
    return min_sections_at(dg, w_square.bottom, window=wg, smooth=smooth,
                           pin={w_square.bottom: w_square})


def has_enough_sections(dg, wg, smooth=True):
    """Search a through-section for every window square.

    Witnesses live on minimal domains, which suffices: restriction keeps
    every defining property.  A missing witness is a certified failure
    since the candidate space is exhausted.
    """
    witnesses = {}
    failures = []
    for sq in sorted(wg.squares, key=_skey):
        found = sections_through(dg, wg, sq, smooth=smooth)
        if found:
            witnesses[sq] = found[0]
        else:
            witnesses[sq] = None
            failures.append(sq)
    return {"ok": not failures, "witnesses": witnesses,
            "failures": failures}


# ---------------------------------------------------------------------------
# axiom suites
# ---------------------------------------------------------------------------


def _openness_and_continuity(pspace, subset, mapping, target_space):
    """(subset open in pspace?, mapping continuous on the subspace?)."""
    is_open = pspace.is_open(subset)
    cont = None
    if is_open:
        try:
            cont = is_continuous(PartialMap(mapping), pspace, target_space)
        except TopologyError:
            cont = False
    return is_open, cont


def check_locally_lie_double(dg, wg, deduction_triples=120):
    """Axioms S1-S5 for a windowed double groupoid, with the standard
    deductions verified when the axioms pass."""
    G = dg.edge
    AS = G.arrow_space()
    report = {}

    neg_set = {dg.neg1(sq) for sq in wg.squares}
    s1_ok = neg_set == wg.squares
    report["S1"] = {"ok": s1_ok,
                    "witnesses": sorted(map(str, neg_set.symmetric_difference(wg.squares)))[:4]}

    missing = [a for a in G.arrows if dg.eps1(a) not in wg]
    report["S2"] = {"ok": not missing, "witnesses": [str(a) for a in missing[:4]]}

    pairs = [(u, v) for u in sorted(wg.squares, key=_skey)
             for v in sorted(wg.squares, key=_skey) if u.bottom == v.bottom]
    pspace = pullback_space([wg.space, wg.space], pairs, lambda p: p)
    wd = [(u, v) for (u, v) in pairs if dg.comp1(u, dg.neg1(v)) in wg]
    diff = {(u, v): dg.comp1(u, dg.neg1(v)) for (u, v) in wd}
    wd_open, wd_cont = _openness_and_continuity(pspace, frozenset(wd), diff, wg.space)
    report["S3"] = {"ok": bool(wd_open and wd_cont),
                    "difference_set_open": wd_open,
                    "difference_continuous": wd_cont}

    top_cont = is_continuous(PartialMap({sq: sq.top for sq in wg.squares}), wg.space, AS)
    bot_cont = is_continuous(PartialMap({sq: sq.bottom for sq in wg.squares}), wg.space, AS)
    enough = has_enough_sections(dg, wg)
    report["S4"] = {"ok": bool(top_cont and bot_cont and enough["ok"]),
                    "source_continuous": top_cont,
                    "target_continuous": bot_cont,
                    "enough_sections": enough["ok"],
                    "missing_sections": [str(sq) for sq in enough["failures"][:4]]}

    vert = dg.vertical_groupoid()
    gen = generated_subgroupoid(vert, wg.squares)
    report["S5"] = {"ok": gen == set(dg.squares),
                    "generated": len(gen), "total": len(dg.squares)}

    report["ok"] = all(report[k]["ok"] for k in ("S1", "S2", "S3", "S4", "S5"))

    if report["ok"]:
        report["deductions"] = _locally_lie_deductions(dg, wg, pspace, enough,
                                                       deduction_triples)
    return report


def _locally_lie_deductions(dg, wg, bottom_pair_space, enough, triple_cap):
    out = {}
    # 1) the vertical inverse is continuous on the window
    inv_map = PartialMap({sq: dg.neg1(sq) for sq in wg.squares})
    out["inverse_continuous"] = is_continuous(inv_map, wg.space, wg.space)
    # 2) composable window pairs whose product stays in the window form an
    #    open set on which the product is continuous
    pairs = [(u, v) for u in sorted(wg.squares, key=_skey)
             for v in sorted(wg.squares, key=_skey) if u.bottom == v.top]
    pspace = pullback_space([wg.space, wg.space], pairs, lambda p: p)
    good = [(u, v) for (u, v) in pairs if dg.comp1(u, v) in wg]
    comp = {(u, v): dg.comp1(u, v) for (u, v) in good}
    p_open, p_cont = _openness_and_continuity(pspace, frozenset(good), comp, wg.space)
    out["product_set_open"] = p_open
    out["product_continuous"] = p_cont
    # the difference restricted to its admitted pair set lands in the window
    bpairs = [(u, v) for u in wg.squares for v in wg.squares if u.bottom == v.bottom]
    wd = [(u, v) for (u, v) in bpairs if dg.comp1(u, dg.neg1(v)) in wg]
    out["difference_lands_in_window"] = all(
        dg.comp1(u, dg.neg1(v)) in wg for (u, v) in wd)
    # 3) triple-restriction: products of window sections that evaluate into
    #    the window restrict to window-valued sections
    secs = []
    for sq, wit in sorted(enough["witnesses"].items(), key=lambda kv: _skey(kv[0])):
        if wit is not None and wit not in secs:
            secs.append(wit)
    checked = failures = 0
    for k, s, t in itertools.product(secs, repeat=3):
        if checked >= triple_cap:
            break
        try:
            ks = local_section_mul(dg, k, s, check=False)
            kst = local_section_mul(dg, ks, t, check=False)
        except Exception:
            continue
        for a in sorted(kst.dom1, key=_skey):
            b = t.squares[a].top
            if b not in ks.dom1:
                continue
            if ks.squares[b] not in wg or kst.squares[a] not in wg:
                continue
            checked += 1
            M = dg.edge.arrow_space().minimal_open(a)
            if not M <= kst.dom1 or any(kst.squares[z] not in wg for z in M):
                failures += 1
            break
    out["triple_restriction_checked"] = checked
    out["triple_restriction_ok"] = failures == 0
    return out


def is_equivariant(cm, arrows):
    """Window closed under the edge action."""
    for c in arrows:
        for a in cm.G.arrows:
            if cm.C.tgt(c) == cm.G.src(a) and apply_action(cm, c, a) not in arrows:
                return False
    return True


def check_locally_lie_xmod(cm, w, dg=None):
    """Axioms C1-C5 for a windowed crossed module, with the cross-check
    that the kernel-side continuity matches the square-side difference."""
    if dg is None:
        dg = build_double_groupoid(cm)
    C, G = cm.C, cm.G
    AS = G.arrow_space()
    report = {}

    gen = generated_subgroupoid(C, w.arrows)
    pairs = [(c1, c2) for c1 in sorted(w.arrows, key=_skey)
             for c2 in sorted(w.arrows, key=_skey) if C.tgt(c1) == C.tgt(c2)]
    pspace = pullback_space([w.space, w.space], pairs, lambda p: p)
    wdiff = [(c1, c2) for (c1, c2) in pairs if C.add(c1, C.neg(c2)) in w.arrows]
    dmap = {(c1, c2): C.add(c1, C.neg(c2)) for (c1, c2) in wdiff}
    d_open, d_cont = _openness_and_continuity(pspace, frozenset(wdiff), dmap, w.space)
    report["C1"] = {"ok": bool(gen == set(C.arrows) and d_open and d_cont),
                    "generates": gen == set(C.arrows),
                    "difference_set_open": d_open,
                    "difference_continuous": d_cont}

    missing = [x for x in C.objects if C.unit(x) not in w.arrows]
    report["C2"] = {"ok": not missing, "witnesses": [str(x) for x in missing]}

    delta_map = PartialMap({c: cm.delta[c] for c in sorted(w.arrows, key=_skey)})
    c3 = is_continuous(delta_map, w.space, AS)
    report["C3"] = {"ok": c3}

    act_pairs = [(c, a) for c in sorted(w.arrows, key=_skey)
                 for a in sorted(G.arrows, key=_skey) if C.tgt(c) == G.src(a)]
    act_space = pullback_space([w.space, AS], act_pairs, lambda p: p)
    wa = [(c, a) for (c, a) in act_pairs if apply_action(cm, c, a) in w.arrows]
    amap = {(c, a): apply_action(cm, c, a) for (c, a) in wa}
    a_open, a_cont = _openness_and_continuity(act_space, frozenset(wa), amap, w.space)
    report["C4"] = {"ok": bool(a_open and a_cont),
                    "action_set_open": a_open, "action_continuous": a_cont}

    wg = build_wg(dg, w)
    enough = has_enough_sections(dg, wg)
    report["C5"] = {"ok": enough["ok"],
                    "missing": [str(sq) for sq in enough["failures"][:4]]}

    # the square-side difference continuity against C3 and C4
    pairs2 = [(u, v) for u in sorted(wg.squares, key=_skey)
              for v in sorted(wg.squares, key=_skey) if u.bottom == v.bottom]
    pspace2 = pullback_space([wg.space, wg.space], pairs2, lambda p: p)
    wd2 = [(u, v) for (u, v) in pairs2 if dg.comp1(u, dg.neg1(v)) in wg]
    diff2 = {(u, v): dg.comp1(u, dg.neg1(v)) for (u, v) in wd2}
    _, sq_cont = _openness_and_continuity(pspace2, frozenset(wd2), diff2, wg.space)
    report["cross_check"] = {
        "kernel_side": bool(c3 and report["C4"]["ok"]),
        "square_side_difference_continuous": bool(sq_cont),
        "agree": bool(c3 and report["C4"]["ok"]) == bool(sq_cont)}

    report["ok"] = all(report[k]["ok"] for k in ("C1", "C2", "C3", "C4", "C5"))
    return report


def action_orbit_closure(cm, arrows):
    """Smallest action-stable superset of the given kernel arrows."""
    out = set(arrows)
    grew = True
    while grew:
        grew = False
        for c in list(out):
            for a in cm.G.arrows:
                if cm.C.tgt(c) == cm.G.src(a):
                    moved = apply_action(cm, c, a)
                    if moved not in out:
                        out.add(moved)
                        grew = True
    return frozenset(out)


def generation_equivalence(cm, w_arrows, dg=None):
    """Window generates the kernel and is action-stable iff the window
    squares generate the double groupoid vertically.

    The square side is insensitive to replacing the window by its action
    orbit, so the sharp equivalent of vertical generation is that the
    orbit closure generates; ``orbit_side`` records that refinement.
    """
    if dg is None:
        dg = build_double_groupoid(cm)
    C = cm.C
    lhs = (generated_subgroupoid(C, w_arrows) == set(C.arrows)
           and is_equivariant(cm, w_arrows))
    vert = dg.vertical_groupoid()
    wg_squares = [sq for sq in dg.squares if sq.inner in set(w_arrows)]
    rhs = generated_subgroupoid(vert, wg_squares) == set(dg.squares)
    orbit = action_orbit_closure(cm, w_arrows)
    orbit_side = generated_subgroupoid(C, orbit) == set(C.arrows)
    return {"kernel_side": lhs, "square_side": rhs, "agree": lhs == rhs,
            "orbit_side": orbit_side, "orbit_agree": orbit_side == rhs}


# ---------------------------------------------------------------------------
# germ groupoids
# ---------------------------------------------------------------------------


def build_germ_groupoid(dg):
    """The groupoid of germs of local linear sections over the edge arrows.

    Objects are edge arrows; a germ runs from the top of its base value to
    its base.  Returns (groupoid, witness sections per germ).
    """
    G = dg.edge
    germs = {}
    witness = {}
    for a in sorted(G.arrows, key=_skey):
        for sec in min_sections_at(dg, a):
            g = germ_at(dg, sec, a)
            if g not in germs:
                germs[g] = g
                witness[g] = sec
    arrows = sorted(germs, key=_skey)
    src = {g: g.source() for g in arrows}
    tgt = {g: g.target() for g in arrows}
    table = {}
    for ga in arrows:
        for gb in arrows:
            if gb.base == ga.value().top:
                prod = germ_mul(dg, gb, ga)
                if prod not in germs:
                    raise HolonomyError("germ product left the germ set at (%s, %s)"
                                        % (gb, ga))
                table[(gb, ga)] = germs[prod]
    neg = {}
    for g in arrows:
        gi = germ_inv(dg, g)
        if gi not in germs:
            raise HolonomyError("germ inverse left the germ set at %s" % (g,))
        neg[g] = germs[gi]
    units = {a: germs[unit_germ(dg, a)] for a in G.arrows}
    groupoid = Groupoid(G.arrows, arrows, src, tgt, table, neg, units)
    return groupoid, witness


def window_germs(dg, wg):
    """Germs of smooth window-valued sections, with witness sections."""
    out = {}
    for a in sorted(dg.edge.arrows, key=_skey):
        for sec in min_sections_at(dg, a, window=wg, smooth=True):
            g = germ_at(dg, sec, a)
            if g not in out:
                out[g] = sec
    return out


def build_restricted_germs(dg, wg, J=None, j_witness=None):
    """Subgroupoid of the germ groupoid generated by window germs.

    Returns (groupoid, seed germs, witness sections for every germ);
    witnesses of products are products of witnesses, so every germ comes
    with an explicit word section.
    """
    if J is None:
        J, j_witness = build_germ_groupoid(dg)
    seed_witness = window_germs(dg, wg)
    seed = set()
    witness = {}
    for g, sec in seed_witness.items():
        if g not in set(J.arrows):
            raise HolonomyError("window germ missing from the germ groupoid: %s" % (g,))
        seed.add(g)
        witness[g] = sec
    # units belong to the generated subgroupoid regardless of the window
    for a in dg.edge.arrows:
        u = unit_germ(dg, a)
        if u not in witness:
            witness[u] = constant_section(dg, dg.edge.arrow_space().minimal_open(a))
    closure = set(witness)
    frontier = True
    while frontier:
        frontier = False
        for g in sorted(closure, key=_skey):
            gi = J.neg(g)
            if gi not in closure:
                witness[gi] = local_section_inv(dg, witness[g])
                closure.add(gi)
                frontier = True
        for g in sorted(closure, key=_skey):
            for h in sorted(closure, key=_skey):
                if J.composable(g, h) and J.add(g, h) not in closure:
                    p = J.add(g, h)
                    witness[p] = local_section_mul(dg, witness[g], witness[h])
                    closure.add(p)
                    frontier = True
    arrows = sorted(closure, key=_skey)
    table = {(g, h): J.add(g, h) for g in arrows for h in arrows if J.composable(g, h)}
    jr = Groupoid(dg.edge.arrows, arrows,
                  {g: g.source() for g in arrows},
                  {g: g.target() for g in arrows},
                  table,
                  {g: J.neg(g) for g in arrows},
                  {a: unit_germ(dg, a) for a in dg.edge.arrows})
    return jr, frozenset(seed), witness


def build_unit_germs(dg, wg, jr, seed):
    """Window germs evaluating to an identity square: the normal kernel.

    Wideness and normality are re-verified, never assumed.
    """
    members = [g for g in seed if g.value() == dg.eps1(g.base)]
    sub = NormalSubgroupoid(jr, members)
    bad = sub.violations()
    if bad:
        raise HolonomyError("kernel germs not a wide normal subgroupoid: %s" % bad[0])
    return sub


# ---------------------------------------------------------------------------
# the holonomy groupoid
# ---------------------------------------------------------------------------


class Chart:
    """Partial injection of window squares into the holonomy groupoid."""

    def __init__(self, section, mapping):
        self.section = section
        self.mapping = dict(mapping)
        self.domain = frozenset(self.mapping)

    def __call__(self, sq):
        return self.mapping[sq]

    def image(self):
        return frozenset(self.mapping.values())

    def inverse_of(self, h):
        for sq in sorted(self.mapping, key=_skey):
            if self.mapping[sq] == h:
                return sq
        raise HolonomyError("value outside chart image")

    def __repr__(self):
        return "Chart(%d squares)" % len(self.mapping)


class HolonomyGroupoid:
    def __init__(self, dg, wg, quotient_groupoid, projection, psi, embed,
                 topology, germ_groupoid, seed, unit_sub, witness, charts, report):
        self.dg = dg
        self.wg = wg
        self.quotient = quotient_groupoid
        self.projection = projection
        self.psi = psi
        self.embed = embed
        self.topology = topology
        self.germ_groupoid = germ_groupoid
        self.seed = seed
        self.unit_sub = unit_sub
        self.witness = witness
        self.charts = charts
        self.report = report

    def class_of(self, germ):
        return self.projection.arr_map[germ]

    def __repr__(self):
        return "HolonomyGroupoid(%d arrows over %d objects)" % (
            len(self.quotient.arrows), len(self.quotient.objects))


def left_translation(dg, sec, w_square):
    """L_s(w) = s(top w) +1 w, defined when the top lies in the domain."""
    if w_square.top not in sec.dom1:
        raise HolonomyError("square top %s outside the section domain" % (w_square.top,))
    return dg.comp1(sec.squares[w_square.top], w_square)


def _chart_for(dg, wg, hol_proj, jr_index, sec, through_cache, strict=True):
    """Chart of a section: w |-> class of [sec * theta]_{bottom w}."""
    G = dg.edge
    mapping = {}
    skipped = 0
    for sq in sorted(wg.squares, key=_skey):
        a = sq.bottom
        if sq.top not in sec.dom1:
            continue
        if not (_feet(G, [sq.top]) <= sec.dom0):
            continue
        thetas = through_cache.get(sq)
        if not thetas:
            continue
        classes = set()
        for theta in thetas:
            prod = local_section_mul(dg, sec, theta, check=False)
            g = germ_at(dg, prod, a)
            if g not in jr_index:
                raise HolonomyError("chart germ escaped the generated germs at %s" % (sq,))
            classes.add(hol_proj.arr_map[g])
        if len(classes) != 1:
            if strict:
                raise HolonomyError("chart value depends on the through-section at %s" % (sq,))
            skipped += 1
            continue
        mapping[sq] = classes.pop()
    return Chart(sec, mapping), skipped


def holonomy_groupoid(cm, w, deduction_triples=120, require_axioms=True):
    """Quotient of the generated germ groupoid by the unit-valued germs,
    with final morphism, window embedding and chart topology.

    Refuses when an axiom fails, naming it; with ``require_axioms`` off
    the germ quotient and charts are still assembled (the embedding is
    then only defined on squares that admit through-sections).
    """
    dg = build_double_groupoid(cm)
    wg = build_wg(dg, w)
    axioms = check_locally_lie_double(dg, wg, deduction_triples=deduction_triples)
    if require_axioms:
        for key in ("S1", "S2", "S3", "S4", "S5"):
            if not axioms[key]["ok"]:
                raise HolonomyError("axiom %s failed: %s" % (key, axioms[key]))

    J, j_witness = build_germ_groupoid(dg)
    bad = check_groupoid(J)
    if bad:
        raise HolonomyError("germ groupoid invalid: %s" % bad[0])
    jr, seed, witness = build_restricted_germs(dg, wg, J, j_witness)
    unit_sub = build_unit_germs(dg, wg, jr, seed)
    hol_raw, proj_raw = quotient(jr, unit_sub)
    if len(hol_raw.objects) != len(jr.objects) or any(len(o) != 1 for o in hol_raw.objects):
        raise HolonomyError("unit germs merged objects; kernel not loop-shaped")
    # kernel germs are loops, so object classes are singletons; unwrap them
    unwrap = {o: next(iter(o)) for o in hol_raw.objects}
    hol = Groupoid([unwrap[o] for o in hol_raw.objects], hol_raw.arrows,
                   {h: unwrap[hol_raw.src(h)] for h in hol_raw.arrows},
                   {h: unwrap[hol_raw.tgt(h)] for h in hol_raw.arrows},
                   hol_raw._table, hol_raw._neg,
                   {unwrap[o]: hol_raw.unit(o) for o in hol_raw.objects})
    proj = GroupoidMorphism({x: x for x in jr.objects}, proj_raw.arr_map)

    # the induced evaluation on classes must be constant on each class
    vert = dg.vertical_groupoid()
    psi_arrows = {}
    for cls in hol.arrows:
        vals = {g.value() for g in cls}
        if len(vals) != 1:
            raise HolonomyError("evaluation not constant on a class: %s"
                                % sorted(map(_skey, cls))[:2])
        psi_arrows[cls] = vals.pop()
    psi = GroupoidMorphism({obj: obj for obj in hol.objects}, psi_arrows)
    bad = check_groupoid_morphism(psi, hol, vert)
    if bad:
        raise HolonomyError("induced evaluation not a morphism: %s" % bad[0])

    # embedding of window squares by germs of through-sections
    jr_set = set(jr.arrows)
    through_cache = {}
    embed = {}
    for sq in sorted(wg.squares, key=_skey):
        thetas = sections_through(dg, wg, sq)
        through_cache[sq] = thetas
        classes = set()
        for theta in thetas:
            g = germ_at(dg, theta, sq.bottom)
            if g not in jr_set:
                raise HolonomyError("through germ outside generated germs at %s" % (sq,))
            classes.add(proj.arr_map[g])
        if not classes:
            if require_axioms:
                raise HolonomyError("no through-section for %s despite S4" % (sq,))
            continue
        if len(classes) != 1:
            if require_axioms:
                raise HolonomyError("embedding ill-defined at %s" % (sq,))
            continue
        embed[sq] = classes.pop()

    # charts and the generated topology
    charts = []
    chart_skips = 0
    seen_sections = set()
    for g in sorted(jr.arrows, key=_skey):
        sec = witness[g]
        if sec in seen_sections:
            continue
        seen_sections.add(sec)
        chart, skipped = _chart_for(dg, wg, proj, jr_set, sec, through_cache,
                                    strict=require_axioms)
        chart_skips += skipped
        charts.append(chart)
    basis = []
    for chart in charts:
        for sq in sorted(chart.domain, key=_skey):
            m = wg.space.minimal_open(sq) & chart.domain
            basis.append(frozenset(chart.mapping[t] for t in m))
    topology = FiniteTopSpace.from_generators(hol.arrows, basis, point_cap=None)

    report = {"axioms": axioms, "embedded_squares": len(embed),
              "window_squares": len(wg.squares), "chart_skips": chart_skips}
    report["psi_identity_on_objects"] = all(
        psi.obj_map[obj] == obj for obj in hol.objects)
    report["psi_section_of_embed"] = all(psi_arrows[embed[sq]] == sq for sq in embed)
    report["embed_injective"] = len(set(embed.values())) == len(embed)
    report["embed_image_open"] = topology.is_open(frozenset(embed.values()))
    preimage = frozenset(h for h in hol.arrows if psi_arrows[h] in wg.squares)
    report["psi_preimage_open"] = topology.is_open(preimage)
    try:
        report["psi_continuous_on_preimage"] = is_continuous(
            PartialMap({h: psi_arrows[h] for h in preimage}), topology, wg.space)
    except TopologyError:
        report["psi_continuous_on_preimage"] = False
    report["psi_unit_on_objects"] = all(
        psi_arrows[hol.unit(obj)] == dg.eps1(obj) for obj in hol.objects)

    return HolonomyGroupoid(dg, wg, hol, proj, psi, embed, topology,
                            jr, seed, unit_sub, witness, charts, report)


def check_chart_coherence(hol):
    """Chart injectivity and transitions as left translations; openness of
    transition images is reported apart, since it is only guaranteed once
    the axioms hold."""
    dg, wg = hol.dg, hol.wg
    out = {"charts": len(hol.charts), "violations": [], "open_image_failures": []}
    for chart in hol.charts:
        if len(set(chart.mapping.values())) != len(chart.mapping):
            out["violations"].append("chart of %r not injective" % (chart.section,))
    for cs in hol.charts:
        for ct in hol.charts:
            overlap = [v for v in sorted(cs.domain, key=_skey)
                       if cs.mapping[v] in ct.image()]
            if not overlap:
                continue
            try:
                eta = local_section_mul(dg, local_section_inv(dg, ct.section),
                                        cs.section, check=False)
            except Exception as e:
                out["violations"].append("transition section undefined: %s" % e)
                continue
            moved = {}
            for v in overlap:
                w_sq = ct.inverse_of(cs.mapping[v])
                if v.top not in eta.dom1:
                    out["violations"].append(
                        "transition at %s not covered by the translation" % (v,))
                    continue
                lt = left_translation(dg, eta, v)
                if lt != w_sq:
                    out["violations"].append(
                        "transition disagrees with left translation at %s" % (v,))
                moved[v] = w_sq
            # transitions carry opens to opens: images of minimal opens
            # within an open overlap must be open
            dom = frozenset(moved)
            if wg.space.is_open(dom):
                for v in sorted(dom, key=_skey):
                    img = frozenset(moved[t] for t in wg.space.minimal_open(v) & dom)
                    if not wg.space.is_open(img):
                        out["open_image_failures"].append(
                            "transition image of a basic open not open at %s" % (v,))
    out["ok"] = not out["violations"]
    out["opens_to_opens"] = not out["open_image_failures"]
    return out


# ---------------------------------------------------------------------------
# the universal property
# ---------------------------------------------------------------------------


def _factorizations(dg, pre_set, w_sq, bound, cap):
    """Vertical factorizations of a square into members of a generating set."""
    results = []

    def walk(current, acc, depth):
        if len(results) >= cap:
            return
        if current in pre_set:
            results.append(tuple(acc) + (current,))
            if len(acc) + 1 >= bound:
                return
        if depth >= bound:
            return
        for u in sorted(pre_set, key=_skey):
            if u.top != current.top:
                continue
            rest = dg.comp1(dg.neg1(u), current)
            if rest == current and u == dg.eps1(current.top):
                continue
            walk(rest, acc + [u], depth + 1)

    walk(w_sq, [], 0)
    seen = []
    for r in results:
        if r not in seen:
            seen.append(r)
    return seen


def push_section(dg_target, mu, sec):
    """Image of a section under a vertical morphism, revalidated."""
    squares = {z: mu.arr_map[sq] for z, sq in sec.squares.items()}
    return section_from_squares(dg_target, sec.dom1, squares)


def universal_morphism(cmA, wA, mu, hol, word_bound=8, max_factorizations=24,
                       theta_choices=3, search_cap=200000):
    """The unique morphism into the holonomy groupoid over a vertical
    morphism of double groupoids.

    Verifies the hypotheses (identity on objects; open, continuous,
    vertically generating preimage of the window; enough sections), builds
    the morphism by factoring through the preimage, re-verifies
    independence of all choices up to the bounds, and certifies
    uniqueness by exhaustive search.
    """
    dgC, wg = hol.dg, hol.wg
    dgA = build_double_groupoid(cmA)
    if frozenset(wA.arrows) != frozenset(cmA.C.arrows):
        raise HolonomyError("hypothesis: the source needs a topology on all of its kernel")
    wgA = build_wg(dgA, wA)

    # (i) identity on objects
    if set(cmA.G.arrows) != set(dgC.edge.arrows):
        raise HolonomyError("hypothesis (i) fails: edge groupoids differ")
    if any(mu.obj_map[a] != a for a in dgA.edge.arrows):
        raise HolonomyError("hypothesis (i) fails: not the identity on objects")
    bad = check_groupoid_morphism(mu, dgA.vertical_groupoid(), dgC.vertical_groupoid())
    if bad:
        raise HolonomyError("not a vertical morphism: %s" % bad[0])

    # (ii) the preimage of the window
    pre = frozenset(sq for sq in dgA.squares if mu.arr_map[sq] in wg.squares)
    if not wgA.space.is_open(pre):
        raise HolonomyError("hypothesis (ii) fails: window preimage not open")
    if not is_continuous(PartialMap({sq: mu.arr_map[sq] for sq in pre}),
                         wgA.space, wg.space):
        raise HolonomyError("hypothesis (ii) fails: morphism not continuous on the preimage")
    vertA = dgA.vertical_groupoid()
    if generated_subgroupoid(vertA, pre) != set(dgA.squares):
        raise HolonomyError("hypothesis (ii) fails: preimage does not generate vertically")

    # (iii) enough sections on the source
    enough = has_enough_sections(dgA, wgA)
    if not enough["ok"]:
        raise HolonomyError("hypothesis (iii) fails: not enough sections on the source")

    preW = square_subwindow(wgA, pre)
    jr_set = set(hol.germ_groupoid.arrows)

    def classes_for(w_sq):
        found = set()
        for fact in _factorizations(dgA, pre, w_sq, word_bound, max_factorizations):
            base = w_sq.bottom
            chain = []
            ok = True
            for piece in reversed(fact):
                thetas = sections_through(dgA, preW, piece)[:theta_choices]
                pushed = []
                for theta in thetas:
                    img = push_section(dgC, mu, theta)
                    if img is None:
                        continue
                    if smoothness_violations(dgC, wg, img):
                        continue
                    pushed.append(img)
                if not pushed:
                    ok = False
                    break
                chain.append(pushed)
            if not ok:
                continue
            for combo in itertools.product(*chain):
                a = base
                cls = None
                good = True
                for img in combo:
                    if a not in img.dom1:
                        good = False
                        break
                    g = germ_at(dgC, img, a)
                    if g not in jr_set:
                        good = False
                        break
                    step = hol.projection.arr_map[g]
                    cls = step if cls is None else hol.quotient.add(step, cls)
                    a = g.source()
                if good and cls is not None:
                    found.add(cls)
        return found

    mu_prime_map = {}
    for w_sq in sorted(dgA.squares, key=_skey):
        if w_sq in pre:
            cands = {hol.embed[mu.arr_map[w_sq]]}
            extra = classes_for(w_sq)
            cands |= extra
        else:
            cands = classes_for(w_sq)
        if not cands:
            raise HolonomyError("factorization bound exceeded at %s" % (w_sq,))
        if len(cands) != 1:
            raise HolonomyError("construction not independent of choices at %s" % (w_sq,))
        mu_prime_map[w_sq] = cands.pop()

    mu_prime = GroupoidMorphism({a: a for a in dgA.edge.arrows}, mu_prime_map)
    report = {}
    bad = check_groupoid_morphism(mu_prime, vertA, hol.quotient)
    report["is_morphism"] = not bad
    report["psi_after"] = all(hol.psi.arr_map[mu_prime_map[sq]] == mu.arr_map[sq]
                              for sq in dgA.squares)
    report["embeds_preimage"] = all(mu_prime_map[sq] == hol.embed[mu.arr_map[sq]]
                                    for sq in pre)
    if bad:
        raise HolonomyError("constructed map not a morphism: %s" % bad[0])

    # uniqueness by exhaustive search over qualifying morphisms
    squares = sorted(dgA.squares, key=_skey)
    fibers = {}
    for sq in squares:
        if sq in pre:
            fibers[sq] = [hol.embed[mu.arr_map[sq]]]
        else:
            fibers[sq] = [h for h in hol.quotient.arrows
                          if hol.psi.arr_map[h] == mu.arr_map[sq]
                          and hol.quotient.src(h) == sq.top
                          and hol.quotient.tgt(h) == sq.bottom]
    count = [0]
    solutions = []

    def search(i, assign):
        if len(solutions) > 1:
            return
        count[0] += 1
        if count[0] > search_cap:
            raise HolonomyError("uniqueness search cap exceeded")
        if i == len(squares):
            solutions.append(dict(assign))
            return
        sq = squares[i]
        for h in fibers[sq]:
            assign[sq] = h
            good = True
            for u in squares[:i + 1]:
                for v in squares[:i + 1]:
                    if u.bottom == v.top:
                        uv = dgA.comp1(u, v)
                        if uv in assign:
                            if hol.quotient.add(assign[u], assign[v]) != assign[uv]:
                                good = False
                                break
                if not good:
                    break
            if good:
                search(i + 1, assign)
            del assign[sq]

    search(0, {})
    report["qualifying_morphisms"] = len(solutions)
    report["unique"] = len(solutions) == 1 and solutions[0] == mu_prime_map
    return mu_prime, report


def identity_vertical_morphism(dg):
    return GroupoidMorphism({a: a for a in dg.edge.arrows},
                            {sq: sq for sq in dg.squares})
