import pytest

from redraft import (
    CandidateKind,
    ExtractCandidate,
    Mode,
    Policy,
    PullUpMatch,
    Rule,
    StaleMatchError,
    TieHandling,
    applicable_steps,
    apply_extract,
    apply_step,
    apply_pullup,
    build,
    find_extract_candidates,
    find_pullup_matches,
    maximal_candidates,
    semantic_signature,
    validate,
)
from redraft.diagram import TypeRef
from redraft.fixtures import f1, f2, f3, f4, f5

from helpers import PlainModel, corpus

INT = TypeRef("Int")
STR = TypeRef("Str")
FREE_BRANCH = Policy(Mode.FREE, TieHandling.BRANCH_ALL)


def eid(d, name):
    return d.entity_by_name(name).id


def names(d, ids):
    return {d.name_of(i) for i in ids}


def gen_pairs(d):
    return {(d.name_of(g.specific), d.name_of(g.general)) for g in d.generalizations}


def owned(d):
    return {(d.name_of(p.owner), p.name, p.type.name) for p in d.properties}


class TestFindPullup:
    def test_f1(self):
        d = f1()
        [m] = find_pullup_matches(d)
        assert (d.name_of(m.superclass), m.name, m.type) == ("A", "x", INT)
        assert names(d, m.members) == {"B", "C"}
        assert m.count == 2

    def test_f2_all_quantifier_fails(self):
        assert find_pullup_matches(f2()) == []

    def test_single_subclass(self):
        assert find_pullup_matches(build(["A", "B"], [("B", "x", "Int")], [("B", "A")])) == []

    def test_type_must_match(self):
        d = build(["A", "B", "C"], [("B", "x", "Int"), ("C", "x", "Str")], [("B", "A"), ("C", "A")])
        assert find_pullup_matches(d) == []

    def test_guard_superclass_owns_name(self):
        d = build(
            ["A", "B", "C"],
            [("A", "x", "Str"), ("B", "x", "Int"), ("C", "x", "Int")],
            [("B", "A"), ("C", "A")],
        )
        assert find_pullup_matches(d) == []
        # the full cover then stays available to subclass extraction
        [c] = find_extract_candidates(d, CandidateKind.SUBCLASS)
        assert names(d, c.members) == {"B", "C"}

    def test_sorted(self):
        d = build(
            ["Z", "A", "z1", "z2", "a1", "a2"],
            [(e, n, "Int") for e in ("z1", "z2", "a1", "a2") for n in ("q", "p")],
            [("z1", "Z"), ("z2", "Z"), ("a1", "A"), ("a2", "A")],
        )
        keys = [(d.name_of(m.superclass), m.name) for m in find_pullup_matches(d)]
        assert keys == [("A", "p"), ("A", "q"), ("Z", "p"), ("Z", "q")]

    def test_matches_plain_oracle_on_random_corpus(self):
        for d in corpus(11, 150, max_entities=10):
            got = [(d.name_of(m.superclass), m.name, m.type.name) for m in find_pullup_matches(d)]
            assert got == PlainModel(d).pullup_sites()


class TestApplyPullup:
    def test_f1(self):
        d = f1()
        [m] = find_pullup_matches(d)
        out = apply_pullup(d, m)
        assert owned(out) == {("A", "x", "Int")}
        assert gen_pairs(out) == gen_pairs(d)
        assert validate(out).ok

    def test_property_count_drops_by_count_minus_one(self):
        d = f1()
        [m] = find_pullup_matches(d)
        assert len(apply_pullup(d, m).properties) == len(d.properties) - (m.count - 1)

    def test_signature(self):
        d = f1()
        before = semantic_signature(d)
        after = semantic_signature(apply_pullup(d, find_pullup_matches(d)[0]))
        assert after["B"] == before["B"] and after["C"] == before["C"]
        assert after["A"] == before["A"] | {("x", "Int")}

    def test_input_untouched(self):
        d = f1()
        snapshot = d.copy()
        apply_pullup(d, find_pullup_matches(d)[0])
        assert d == snapshot

    def test_stale(self):
        d = f1()
        [m] = find_pullup_matches(d)
        out = apply_pullup(d, m)
        with pytest.raises(StaleMatchError, match="stale match"):
            apply_pullup(out, m)

    def test_stale_when_members_differ(self):
        d = f1()
        [m] = find_pullup_matches(d)
        partial = PullUpMatch(m.superclass, m.name, m.type, frozenset(list(m.members)[:1]))
        with pytest.raises(StaleMatchError):
            apply_pullup(d, partial)


class TestFindExtract:
    def test_f2_subclass(self):
        d = f2()
        [c] = find_extract_candidates(d, CandidateKind.SUBCLASS)
        assert c.kind is CandidateKind.SUBCLASS
        assert (d.name_of(c.anchor), c.name, c.type, c.count) == ("A", "x", INT, 2)
        assert names(d, c.members) == {"B", "C"}

    def test_f3_root(self):
        d = f3()
        [c] = find_extract_candidates(d, CandidateKind.ROOT)
        assert c.anchor is None
        assert (c.name, c.type, c.count) == ("x", STR, 2)
        assert names(d, c.members) == {"B", "C"}

    def test_f1_full_cover_belongs_to_pullup(self):
        assert find_extract_candidates(f1(), CandidateKind.SUBCLASS) == []

    def test_members_are_maximal(self):
        d = build(
            ["A", "B", "C", "D", "E"],
            [("B", "x", "Int"), ("C", "x", "Int"), ("D", "x", "Int")],
            [(s, "A") for s in "BCDE"],
        )
        [c] = find_extract_candidates(d, CandidateKind.SUBCLASS)
        assert names(d, c.members) == {"B", "C", "D"}

    def test_root_kind_ignores_non_roots(self):
        d = build(["A", "B", "C"], [("B", "x", "Int"), ("C", "x", "Int")], [("B", "A")])
        assert find_extract_candidates(d, CandidateKind.ROOT) == []

    def test_sorting_root_before_anchors_by_key(self):
        d = build(
            ["R1", "R2", "A", "B", "C", "D"],
            [("R1", "k", "Int"), ("R2", "k", "Int"), ("B", "y", "Int"), ("C", "y", "Int")],
            [("B", "A"), ("C", "A"), ("D", "A")],
        )
        subs = find_extract_candidates(d, CandidateKind.SUBCLASS)
        roots = find_extract_candidates(d, CandidateKind.ROOT)
        assert [c.name for c in subs] == ["y"]
        assert [c.name for c in roots] == ["k"]

    def test_matches_plain_oracle_on_random_corpus(self):
        for d in corpus(12, 150, max_entities=10):
            got = []
            for kind in CandidateKind:
                for c in find_extract_candidates(d, kind):
                    got.append(("" if c.anchor is None else d.name_of(c.anchor), c.name, c.type.name))
            assert sorted(got) == PlainModel(d).extract_sites()


class TestMaximal:
    def _c(self, n, name="x"):
        return ExtractCandidate(CandidateKind.ROOT, None, name, INT, frozenset(range(n)))

    def test_max(self):
        small, big = self._c(2), self._c(3)
        assert maximal_candidates([small, big]) == [big]

    def test_ties_kept_in_order(self):
        c1, c2 = self._c(2, "x"), self._c(2, "y")
        assert maximal_candidates([c1, c2]) == [c1, c2]

    def test_empty(self):
        assert maximal_candidates([]) == []


class TestApplyExtract:
    def test_f2(self):
        d = f2()
        [c] = find_extract_candidates(d, CandidateKind.SUBCLASS)
        out = apply_extract(d, c)
        assert {e.name for e in out.entities} == {"A", "B", "C", "D", "x_Int"}
        assert gen_pairs(out) == {("B", "x_Int"), ("C", "x_Int"), ("x_Int", "A"), ("D", "A")}
        assert owned(out) == {("x_Int", "x", "Int")}
        assert out.entity_by_name("x_Int").synthetic
        assert validate(out).ok

    def test_f3(self):
        d = f3()
        [c] = find_extract_candidates(d, CandidateKind.ROOT)
        out = apply_extract(d, c)
        assert gen_pairs(out) == {("B", "x_Str"), ("C", "x_Str")}
        assert owned(out) == {("x_Str", "x", "Str")}
        assert out.is_root(out.entity_by_name("x_Str").id)
        assert out.is_root(out.entity_by_name("D").id)

    @pytest.mark.parametrize("make, kind", [(f2, CandidateKind.SUBCLASS), (f3, CandidateKind.ROOT)])
    def test_property_count(self, make, kind):
        d = make()
        [c] = find_extract_candidates(d, kind)
        assert len(apply_extract(d, c).properties) == len(d.properties) - (c.count - 1)

    def test_fresh_name_avoids_collision(self):
        d = build(["A", "B", "C", "D", "x_Int"], [("B", "x", "Int"), ("C", "x", "Int")],
                  [("B", "A"), ("C", "A"), ("D", "A")])
        [c] = find_extract_candidates(d, CandidateKind.SUBCLASS)
        out = apply_extract(d, c)
        assert out.entity_by_name("x_Int_1").synthetic
        assert not out.entity_by_name("x_Int").synthetic

    def test_stale(self):
        d = f2()
        [c] = find_extract_candidates(d, CandidateKind.SUBCLASS)
        with pytest.raises(StaleMatchError, match="stale match"):
            apply_extract(apply_extract(d, c), c)

    def test_stale_non_maximal_members(self):
        d = f2()
        [c] = find_extract_candidates(d, CandidateKind.SUBCLASS)
        sub = ExtractCandidate(c.kind, c.anchor, c.name, c.type, frozenset([eid(d, "B"), eid(d, "D")]))
        with pytest.raises(StaleMatchError):
            apply_extract(d, sub)

    def test_never_deletes_or_renames(self):
        for d in corpus(13, 100, max_entities=10):
            for step in applicable_steps(d, FREE_BRANCH):
                out = apply_step(d, step)
                for e in d.entities:
                    assert out.entity(e.id) == e
                assert set(d.types) <= set(out.types)
                assert validate(out).ok


class TestApplicableSteps:
    def test_f1_priority(self):
        steps = applicable_steps(f1(), Policy())
        assert [s.rule for s in steps] == [Rule.PULL_UP]

    def test_f2_priority(self):
        d = f2()
        [s] = applicable_steps(d, Policy())
        assert s.rule is Rule.EXTRACT_SUB
        assert (d.name_of(s.site.anchor), s.site.name, s.site.type) == ("A", "x", INT)

    def test_normal_form(self):
        assert applicable_steps(build(["A", "B"], generalizations=[("B", "A")]), Policy()) == []

    def test_priority_prefers_subclass_over_root(self):
        d = build(
            ["R", "S", "B", "C", "D"],
            [("R", "k", "Int"), ("S", "k", "Int"), ("B", "x", "Int"), ("C", "x", "Int")],
            [("B", "R"), ("C", "R"), ("D", "R")],
        )
        assert [s.rule for s in applicable_steps(d, Policy())] == [Rule.EXTRACT_SUB]
        assert [s.rule for s in applicable_steps(d, Policy(Mode.FREE))] == [Rule.EXTRACT_SUB, Rule.EXTRACT_ROOT]

    def test_ties_branch_or_pick_first(self):
        d = f5()
        branch = applicable_steps(d, Policy(Mode.PRIORITY, TieHandling.BRANCH_ALL))
        det = applicable_steps(d, Policy())
        assert [s.site.name for s in branch] == ["x", "y"]
        assert det == branch[:1]

    def test_global_maximality_across_anchors(self):
        d = build(
            ["A", "P", "a1", "a2", "a3", "p1", "p2", "p3", "p4"],
            [("a1", "x", "Int"), ("a2", "x", "Int"),
             ("p1", "y", "Int"), ("p2", "y", "Int"), ("p3", "y", "Int")],
            [("a1", "A"), ("a2", "A"), ("a3", "A"), ("p1", "P"), ("p2", "P"), ("p3", "P"), ("p4", "P")],
        )
        [s] = applicable_steps(d, FREE_BRANCH)
        assert d.name_of(s.site.anchor) == "P" and s.count == 3

    def test_free_is_union(self):
        d = build(
            ["A", "B", "C", "P", "Q", "R", "S"],
            [("B", "x", "Int"), ("C", "x", "Int"), ("Q", "y", "Int"), ("R", "y", "Int"),
             ("A", "k", "Str"), ("P", "k", "Str")],
            [("B", "A"), ("C", "A"), ("Q", "P"), ("R", "P"), ("S", "P")],
        )
        rules = [s.rule for s in applicable_steps(d, FREE_BRANCH)]
        assert rules == [Rule.PULL_UP, Rule.EXTRACT_SUB, Rule.EXTRACT_ROOT]

    def test_f4_branches_on_both(self):
        assert len(applicable_steps(f4(), FREE_BRANCH)) == 2

    def test_step_describe(self):
        d = f1()
        [s] = applicable_steps(d)
        assert s.describe(d) == "pull-up x: Int into A from {B, C}"
