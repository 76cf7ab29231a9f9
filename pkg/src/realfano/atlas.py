"""Queryable atlas of the 105 Mori–Mukai families with component-count
bounds and a rules engine for R-rationality.

The data lives in ``data/atlas.json``.  ``decide`` evaluates every rule
that applies to a family against the supplied evidence.  Rules that fire
must agree; the verdict carries the citation of the highest-priority one.
When no rule fires, the verdict lists the smallest set of certificates
that would let one fire.
"""

from __future__ import annotations

import copy
import enum
import itertools
import json
import re
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable

from .bounds import HodgeData, smith_thom_bound

FAMILY_COUNTS = {1: 17, 2: 36, 3: 31, 4: 13, 5: 3, 6: 1, 7: 1, 8: 1, 9: 1, 10: 1}
GEOMETRIC_RATIONALITY = ("Rational", "ConjecturallyIrrational", "Irrational")
EXISTS_IC = ("Yes", "No", "Unknown")


class UnknownFamily(KeyError):
    def __str__(self):
        return f"unknown family {self.args[0]!r}"


class InconsistentEvidence(ValueError):
    pass


class Kind(enum.Enum):
    NONEMPTY = "NonemptyRealLocus"
    CONNECTED = "ConnectedRealLocus"
    LINE = "RealLine"
    CONIC = "RealConic"
    TWISTED_CUBIC = "RealTwistedCubic"
    PICARD_ONE = "RealPicardRankOne"
    PICARD_RANK = "RealPicardRank"


_ALIASES = {
    "nonempty": Kind.NONEMPTY,
    "connected": Kind.CONNECTED,
    "line": Kind.LINE,
    "conic": Kind.CONIC,
    "cubic": Kind.TWISTED_CUBIC,
    "twisted-cubic": Kind.TWISTED_CUBIC,
    "picard-one": Kind.PICARD_ONE,
    "rank-one": Kind.PICARD_ONE,
}
_ALIASES.update({k.value.lower(): k for k in Kind if k is not Kind.PICARD_RANK})


@dataclass(frozen=True)
class Certificate:
    kind: Kind
    value: int | None = None

    def __post_init__(self):
        if (self.kind is Kind.PICARD_RANK) != (self.value is not None):
            raise ValueError("only RealPicardRank carries a value")
        if self.value is not None and self.value < 1:
            raise ValueError("Picard rank must be positive")

    def __str__(self):
        return f"{self.kind.value}({self.value})" if self.value is not None else self.kind.value

    def __lt__(self, other):
        return (self.kind.value, self.value or 0) < (other.kind.value, other.value or 0)

    @classmethod
    def parse(cls, text: str) -> "Certificate":
        t = text.strip().lower()
        m = re.fullmatch(r"(?:picard|realpicardrank|rank)[=(:]?(\d+)\)?", t)
        if m:
            return cls(Kind.PICARD_RANK, int(m.group(1)))
        if t in _ALIASES:
            return cls(_ALIASES[t])
        raise ValueError(f"unknown certificate {text!r}")


@dataclass(frozen=True)
class FamilyId:
    m: int
    n: int

    def __post_init__(self):
        if self.m not in FAMILY_COUNTS or not 1 <= self.n <= FAMILY_COUNTS[self.m]:
            raise UnknownFamily(f"{self.m}.{self.n}")

    def __str__(self):
        return f"{self.m}.{self.n}"

    @classmethod
    def parse(cls, text) -> "FamilyId":
        if isinstance(text, FamilyId):
            return text
        m = re.fullmatch(r"\s*(?:№|no\.?\s*)?(\d+)\.(\d+)\s*", str(text), re.IGNORECASE)
        if not m:
            raise UnknownFamily(str(text))
        return cls(int(m.group(1)), int(m.group(2)))


@dataclass(frozen=True)
class FanoFamilyRecord:
    id: str
    iota: int | None
    degree: int | None
    genus: int | None
    h12: int
    rho_c: int
    anticanonical_degree: int
    geometric_rationality: str
    s_lower: int | None
    s_upper: int | None
    exists_irrational_connected: str
    description: str
    source: str
    recap: bool
    product_with_del_pezzo: bool

    @property
    def family(self) -> FamilyId:
        return FamilyId.parse(self.id)

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Rule:
    id: str
    citation: str
    verdict: str
    summary: str
    families: tuple[str, ...] = ()


@dataclass(frozen=True)
class Verdict:
    status: str  # Rational, Irrational, NeedsCertificate, Undetermined
    rule: str | None = None
    missing: tuple[Certificate, ...] = ()
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "rule": self.rule,
            "missing": [str(c) for c in self.missing],
            "detail": self.detail,
        }

    def __str__(self):
        if self.status == "NeedsCertificate":
            s = f"NeedsCertificate([{', '.join(str(c) for c in self.missing)}])"
        else:
            s = self.status
        if self.rule:
            s += f", rule {self.rule}"
        if self.detail:
            s += f" {self.detail}"
        return s


NONEMPTY = Certificate(Kind.NONEMPTY)
CONNECTED = Certificate(Kind.CONNECTED)
LINE = Certificate(Kind.LINE)
CONIC = Certificate(Kind.CONIC)
TWISTED_CUBIC = Certificate(Kind.TWISTED_CUBIC)
PICARD_ONE = Certificate(Kind.PICARD_ONE)
POSITIVE_KINDS = (NONEMPTY, CONNECTED, LINE, CONIC, TWISTED_CUBIC, PICARD_ONE)


@dataclass
class _Outcome:
    priority: int
    rule: Rule
    status: str | None = None  # Rational / Irrational when fired
    missing: tuple[Certificate, ...] = ()
    detail: str = ""


@dataclass
class Atlas:
    families: dict[str, FanoFamilyRecord]
    rules: dict[str, Rule]
    recap_order: list[str]
    schema: str = ""
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, doc: dict) -> "Atlas":
        fams = {}
        for f in doc["families"]:
            rec = FanoFamilyRecord(**f)
            fams[str(FamilyId.parse(rec.id))] = rec
        rules = {r["id"]: Rule(r["id"], r["citation"], r["verdict"], r["summary"], tuple(r.get("families", ()))) for r in doc["rules"]}
        meta = {k: v for k, v in doc.items() if k not in {"families", "rules", "recap_order", "schema"}}
        return cls(fams, rules, list(doc["recap_order"]), doc.get("schema", ""), meta)

    def copy(self) -> "Atlas":
        return copy.deepcopy(self)

    def replace(self, family: str, **changes) -> "Atlas":
        """A copy with one record's fields changed (for fault injection)."""
        from dataclasses import replace

        out = self.copy()
        key = str(FamilyId.parse(family))
        out.families[key] = replace(out.families[key], **changes)
        return out

    # -- queries ---------------------------------------------------------------

    def lookup(self, family) -> FanoFamilyRecord:
        key = str(FamilyId.parse(family))
        try:
            return self.families[key]
        except KeyError:
            raise UnknownFamily(key) from None

    def table(self, s_gt: int | None = None, m: int | None = None, **unknown) -> list[FanoFamilyRecord]:
        """Records in Mori–Mukai order, or recap rows in recap order.

        ``s_gt`` selects recap rows whose lower bound exceeds it; ``m``
        selects one Picard rank.  Any other keyword is an error.
        """
        if unknown:
            raise KeyError(f"unknown filter key(s): {', '.join(sorted(unknown))}")
        if s_gt is not None:
            rows = [self.families[i] for i in self.recap_order]
            rows = [r for r in rows if r.s_lower is not None and r.s_lower > s_gt]
        else:
            rows = sorted(self.families.values(), key=lambda r: (r.family.m, r.family.n))
        if m is not None:
            rows = [r for r in rows if r.family.m == m]
        return rows

    # -- rules -----------------------------------------------------------------

    def _normalize(self, rec, evidence, negative):
        pos, neg = set(), set()
        for src, dst, other in ((evidence, pos, neg), (negative, neg, pos)):
            for c in src:
                if isinstance(c, str):
                    c = Certificate.parse(c)
                if c.kind is Kind.PICARD_RANK:
                    if c.value > rec.rho_c:
                        raise InconsistentEvidence(f"real Picard rank {c.value} exceeds the geometric rank {rec.rho_c}")
                    if dst is pos:
                        (pos if c.value == 1 else neg).add(PICARD_ONE)
                    elif c.value == 1:
                        neg.add(PICARD_ONE)
                    continue
                dst.add(c)
        if rec.rho_c == 1:
            pos.add(PICARD_ONE)
        clash = pos & neg
        if clash:
            raise InconsistentEvidence("asserted and denied: " + ", ".join(sorted(str(c) for c in clash)))
        return pos, neg

    def _outcomes(self, rec, pos, neg) -> list[_Outcome]:
        fid = rec.id
        out: list[_Outcome] = []

        def fire(prio, rule_id, status, detail=""):
            out.append(_Outcome(prio, self.rules[rule_id], status, (), detail))

        def iff(prio, rule_id, conds, hypotheses=(), detail=""):
            # rational iff all conds hold, provided every hypothesis holds
            if any(h in neg for h in hypotheses):
                return
            missing_h = tuple(h for h in hypotheses if h not in pos)
            if not missing_h and any(c in neg for c in conds):
                fire(prio, rule_id, "Irrational", detail)
                return
            missing = missing_h + tuple(c for c in conds if c not in pos)
            if not missing:
                fire(prio, rule_id, "Rational", detail)
            elif not any(c in neg for c in conds):
                out.append(_Outcome(prio, self.rules[rule_id], None, missing, detail))

        if NONEMPTY in neg:
            fire(0, "empty-real-locus", "Irrational")
        if NONEMPTY in pos and CONNECTED in neg:
            fire(1, "disconnected-real-locus", "Irrational")
        if rec.geometric_rationality == "Irrational":
            rule_id = {1: "not-geometrically-rational-1", 2: "not-geometrically-rational-2", 3: "not-geometrically-rational-3"}[rec.rho_c]
            fire(2, rule_id, "Irrational")
        if fid == "1.15":
            fire(3, "kp-1.15", "Rational")
        if fid in self.rules["kp-nonempty"].families:
            iff(3, "kp-nonempty", (NONEMPTY,))
        if fid == "1.14":
            iff(3, "kp-1.14", (NONEMPTY, LINE))
        if fid == "1.8":
            iff(3, "kp-1.8", (NONEMPTY, TWISTED_CUBIC))
        if fid == "1.9":
            if NONEMPTY in pos:
                fire(3, "conics-1.9", "Rational")
            iff(4, "kp-1.9", (NONEMPTY, CONIC))
        if fid in self.rules["kp-rank-one"].families:
            iff(3, "kp-rank-one", (NONEMPTY,), hypotheses=(PICARD_ONE,))
        if fid == "2.12" and PICARD_ONE not in neg:
            if PICARD_ONE in pos:
                fire(3, "kp-2.12", "Irrational")
            else:
                out.append(_Outcome(3, self.rules["kp-2.12"], None, (PICARD_ONE,)))
        if rec.geometric_rationality == "Rational" and rec.s_upper == 1:
            iff(5, "s-equals-one", (NONEMPTY,), detail=f"via {rec.source}")
        if rec.product_with_del_pezzo:
            iff(6, "product", (NONEMPTY, CONNECTED))
        return out

    def decide(self, family, evidence: Iterable = (), negative: Iterable = ()) -> Verdict:
        rec = self.lookup(family)
        pos, neg = self._normalize(rec, evidence, negative)
        outcomes = sorted(self._outcomes(rec, pos, neg), key=lambda o: o.priority)
        fired = [o for o in outcomes if o.status]
        statuses = {o.status for o in fired}
        if len(statuses) > 1:
            pro = [o.rule.citation for o in fired if o.status == "Rational"]
            con = [o.rule.citation for o in fired if o.status == "Irrational"]
            raise InconsistentEvidence(
                f"evidence makes {rec.id} rational by {', '.join(pro)} and irrational by {', '.join(con)}"
            )
        if fired:
            o = fired[0]
            return Verdict(o.status, o.rule.citation, (), o.detail)
        pending = [o for o in outcomes if o.missing]
        if pending:
            o = min(pending, key=lambda o: (len(o.missing), o.priority))
            return Verdict("NeedsCertificate", o.rule.citation, tuple(sorted(o.missing)), o.detail)
        return Verdict("Undetermined")

    # -- validation --------------------------------------------------------------

    def consistency_check(self) -> list[str]:
        v: list[str] = []
        counts = {m: 0 for m in FAMILY_COUNTS}
        for key, r in self.families.items():
            counts[r.family.m] += 1
            if r.rho_c != r.family.m:
                v.append(f"{key}: rho_c {r.rho_c} differs from the rank in the family number")
            if r.geometric_rationality not in GEOMETRIC_RATIONALITY:
                v.append(f"{key}: unknown geometric rationality {r.geometric_rationality!r}")
            if r.exists_irrational_connected not in EXISTS_IC:
                v.append(f"{key}: unknown exists-IC value {r.exists_irrational_connected!r}")
            if r.h12 < 0:
                v.append(f"{key}: negative h12")
            if r.iota is not None and r.degree is not None and r.degree * r.iota**3 != r.anticanonical_degree:
                v.append(f"{key}: degree {r.degree} and index {r.iota} do not give -K^3 = {r.anticanonical_degree}")
            if r.s_lower is not None and r.s_upper is not None and r.s_lower > r.s_upper:
                v.append(f"{key}: s_lower {r.s_lower} exceeds s_upper {r.s_upper}")
            bound = smith_thom_bound(HodgeData(r.rho_c, r.h12))
            for name in ("s_lower", "s_upper"):
                val = getattr(r, name)
                if val is not None and val > bound:
                    v.append(f"{key}: {name} {val} exceeds the Smith-Thom bound {bound}")
            if r.recap and (r.s_lower is None or r.s_lower < 2):
                v.append(f"{key}: recap row without s_lower >= 2")
            if r.recap and r.geometric_rationality != "Rational":
                v.append(f"{key}: recap row is not geometrically rational")
            if r.geometric_rationality == "Rational" and r.s_upper == 1 and r.exists_irrational_connected != "No":
                v.append(f"{key}: s = 1 but an irrational connected member is not excluded")
        for m, c in FAMILY_COUNTS.items():
            if counts[m] != c:
                v.append(f"rank {m}: {counts[m]} families, expected {c}")
        if {k for k, r in self.families.items() if r.recap} != set(self.recap_order):
            v.append("recap flags and recap order disagree")
        citations = {r.citation for r in self.rules.values()}
        for rule in self.rules.values():
            if not rule.citation:
                v.append(f"rule {rule.id}: missing citation")
            for f in rule.families:
                if f not in self.families:
                    v.append(f"rule {rule.id}: unknown family {f}")
        checked = set(self.recap_order)
        for rule in self.rules.values():
            checked |= set(rule.families)
        checked |= {k for k, r in self.families.items() if r.s_upper == 1 or r.product_with_del_pezzo}
        for key in sorted(checked, key=lambda k: (FamilyId.parse(k).m, FamilyId.parse(k).n)):
            v.extend(self._check_rules(key, citations))
        return v

    def _check_rules(self, key: str, citations: set[str]) -> list[str]:
        v = []
        rec = self.families[key]
        verdicts = {}
        for size in range(len(POSITIVE_KINDS) + 1):
            for subset in itertools.combinations(POSITIVE_KINDS, size):
                try:
                    verdict = self.decide(key, subset)
                except InconsistentEvidence as exc:
                    v.append(f"{key}: rules disagree on {{{', '.join(map(str, subset))}}}: {exc}")
                    continue
                if verdict.status != "Undetermined" and verdict.rule not in citations:
                    v.append(f"{key}: verdict cites {verdict.rule!r}, which is not in the rule table")
                verdicts[frozenset(subset)] = verdict.status
        for s, status in verdicts.items():
            if status not in ("Rational", "Irrational"):
                continue
            for t, other in verdicts.items():
                if s < t and other != status:
                    v.append(f"{key}: adding evidence changes {status} into {other}")
                    break
        if rec.geometric_rationality == "Rational" and rec.s_upper == 1:
            if self.decide(key, [NONEMPTY]).status != "Rational":
                v.append(f"{key}: s = 1 and a nonempty real locus do not give Rational")
        return v


@lru_cache(maxsize=1)
def default_atlas() -> Atlas:
    text = resources.files("realfano").joinpath("data/atlas.json").read_text(encoding="utf-8")
    return Atlas.from_json(json.loads(text))


def lookup(family) -> FanoFamilyRecord:
    return default_atlas().lookup(family)


def decide(family, evidence: Iterable = (), negative: Iterable = ()) -> Verdict:
    return default_atlas().decide(family, evidence, negative)


def table(**filters) -> list[FanoFamilyRecord]:
    return default_atlas().table(**filters)


def consistency_check() -> list[str]:
    return default_atlas().consistency_check()
