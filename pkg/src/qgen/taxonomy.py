"""Approved action-verb registry and accreditation mapping tables.

Holds the six cognitive levels, the three NCAAA domains, the 17 ABET
subpoints with their approved question-verb rows, and the mapping tables
that tie student outcomes to NCAAA domains. Everything here is immutable
after load; queries are pure and safe under concurrency.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .errors import ConflictingExtension, MalformedExtension, UnknownOutcome, UnknownSubpoint


class BloomLevel(enum.Enum):
    REMEMBERING = 1
    UNDERSTANDING = 2
    APPLYING = 3
    ANALYZING = 4
    EVALUATING = 5
    CREATING = 6

    @property
    def ordinal(self) -> int:
        return self.value

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def from_label(cls, label: str) -> "BloomLevel":
        try:
            return cls[label.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown cognitive level: {label!r}") from None


class NcaaaDomain(enum.Enum):
    KNOWLEDGE = "Knowledge"
    SKILLS = "Skills"
    VALUES = "Values"

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def from_label(cls, label: str) -> "NcaaaDomain":
        try:
            return cls(label.strip().capitalize())
        except ValueError:
            raise ValueError(f"unknown NCAAA domain: {label!r}") from None


# Every level above Understanding measures a skill; Understanding and
# Remembering stay on the knowledge side.
LEVEL_TO_DOMAIN: dict[BloomLevel, NcaaaDomain] = {
    BloomLevel.REMEMBERING: NcaaaDomain.KNOWLEDGE,
    BloomLevel.UNDERSTANDING: NcaaaDomain.KNOWLEDGE,
    BloomLevel.APPLYING: NcaaaDomain.SKILLS,
    BloomLevel.ANALYZING: NcaaaDomain.SKILLS,
    BloomLevel.EVALUATING: NcaaaDomain.SKILLS,
    BloomLevel.CREATING: NcaaaDomain.SKILLS,
}


def ncaaa_domain_for_level(level: BloomLevel) -> NcaaaDomain:
    """Reduce a cognitive level to the NCAAA domain it measures."""
    return LEVEL_TO_DOMAIN[level]


# The five distinct approved verb rows, in row order. A verb may sit in
# more than one row; the registry merges those into one entry per lemma.
ANALYZING_ROW = (
    "appraise", "assess", "evaluate", "compare", "contrast", "criticize",
    "differentiate", "discriminate", "distinguish", "examine", "experiment",
    "question", "test",
)
APPLYING_ROW = (
    "choose", "demonstrate", "employ", "illustrate", "interpret", "operate",
    "schedule", "sketch", "draw", "solve", "use", "write",
)
CREATING_ROW = (
    "assemble", "construct", "create", "design", "develop", "formulate",
    "write",
)
AFFECTIVE_ROW = (
    "appreciate", "accept", "attempt", "challenge", "defend", "dispute",
    "join", "judge", "justify", "question", "share", "support",
)
UNDERSTANDING_ROW = (
    "classify", "describe", "discuss", "explain", "identify", "locate",
    "recognize", "report", "select", "translate", "paraphrase",
)

# row key -> (lemmas, level credited by the row, marked affective)
VERB_ROWS: dict[str, tuple[tuple[str, ...], BloomLevel, bool]] = {
    "analyzing": (ANALYZING_ROW, BloomLevel.ANALYZING, False),
    "applying": (APPLYING_ROW, BloomLevel.APPLYING, False),
    "creating": (CREATING_ROW, BloomLevel.CREATING, False),
    "affective": (AFFECTIVE_ROW, BloomLevel.EVALUATING, True),
    "understanding": (UNDERSTANDING_ROW, BloomLevel.UNDERSTANDING, False),
}

# Irregular past/participle surfaces recognised by the parser.
IRREGULAR_FORMS: dict[str, str] = {
    "wrote": "write",
    "written": "write",
    "drew": "draw",
    "drawn": "draw",
    "chose": "choose",
    "chosen": "choose",
}


class LevelTag(NamedTuple):
    """A (level, affective) classification for one lemma."""

    level: BloomLevel
    affective: bool


@dataclass(frozen=True)
class VerbEntry:
    lemma: str
    levels: frozenset[BloomLevel]
    affective: bool
    affective_levels: frozenset[BloomLevel]
    irregular_forms: tuple[str, ...] = ()

    def tags(self) -> frozenset[LevelTag]:
        return frozenset(
            LevelTag(level, level in self.affective_levels) for level in self.levels
        )


@dataclass(frozen=True)
class SubpointSpec:
    """One ABET subpoint with its approved verb row and domain mapping."""

    id: str
    description: str
    verb_row: tuple[str, ...]
    bloom_levels: frozenset[BloomLevel]
    so_id: int
    ncaaa_domain: NcaaaDomain
    any_level: bool = False


@dataclass(frozen=True)
class SoRow:
    """One student-outcome row of the accreditation mapping table."""

    so_id: int
    title: str
    domain: NcaaaDomain
    level_labels: tuple[str, ...]  # display metadata only, never used to validate


@dataclass(frozen=True)
class MappingTables:
    so_rows: Mapping[int, SoRow]
    level_to_domain: Mapping[BloomLevel, NcaaaDomain]


_SO_TITLES = {
    1: "Analyze a complex computing problem and apply principles of computing "
       "and other relevant disciplines to identify solutions",
    2: "Design, implement, and evaluate a computing-based solution to meet a "
       "given set of computing requirements in the context of the program's discipline",
    3: "Communicate effectively in a variety of professional contexts",
    4: "Recognize professional responsibilities and make informed judgments in "
       "computing practice based on legal and ethical principles",
    5: "Function effectively as a member or leader of a team engaged in "
       "activities appropriate to the program's discipline",
    6: "Support the delivery, use, and management of information systems "
       "within an information systems environment",
}

_SO_DOMAINS = {
    1: NcaaaDomain.SKILLS,
    2: NcaaaDomain.SKILLS,
    3: NcaaaDomain.VALUES,
    4: NcaaaDomain.VALUES,
    5: NcaaaDomain.VALUES,
    6: NcaaaDomain.SKILLS,
}

_SO_LEVEL_LABELS = {
    1: ("L3", "L5", "L6"),
    2: ("L5", "L6"),
    3: ("L2", "L3"),
    4: ("L2", "L3"),
    5: ("L2", "L3"),
    6: ("L2", "L3"),
}

# (subpoint id, row key, any-level flag, description)
_SUBPOINT_DEFS: tuple[tuple[str, str, bool, str], ...] = (
    ("1.1", "analyzing", False,
     "An ability to analyze a complex computing problem"),
    ("1.2", "applying", False,
     "An ability to apply principles of computing and other relevant "
     "disciplines to identify solutions"),
    ("2.1", "creating", False,
     "An ability to design a computer-based system, process, component, or "
     "program to meet desired needs"),
    ("2.2", "applying", False,
     "An ability to implement a computer-based system, process, component, "
     "or program to meet desired needs"),
    ("2.3", "affective", False,
     "An ability to evaluate a computer-based system, process, component, "
     "or program to meet desired needs"),
    ("3.1", "applying", False,
     "An ability to conduct an oral presentation using effective "
     "communication skills"),
    ("3.2", "applying", False,
     "An ability to write in a clear, concise, grammatically correct and "
     "organized manner"),
    ("3.3", "applying", False,
     "An ability to develop appropriate illustrations including hand "
     "sketches, computer generated drawings/graphs and pictures"),
    ("4.1", "understanding", False,
     "Understanding of professional responsibilities, ethical theories, "
     "legal and social issues"),
    ("4.2", "understanding", False,
     "Understanding of cyber security threats and corresponding procedures "
     "to mitigate these threats"),
    ("4.3", "understanding", False,
     "Understanding of risk management, security policies and audit "
     "procedures"),
    ("5.1", "applying", False,
     "An ability to prepare a work schedule for the assigned task and "
     "complete it within the appropriate deadlines"),
    ("5.2", "affective", True,
     "An ability to participate in team meetings with full preparedness "
     "for providing useful input"),
    ("5.3", "affective", True,
     "An ability to share ideas among the team and promote good "
     "communication among the team members"),
    ("6.1", "analyzing", False,
     "Support the delivery of information systems within an information "
     "systems environment"),
    ("6.2", "applying", False,
     "Support the use of information systems within an information systems "
     "environment"),
    ("6.3", "understanding", False,
     "Support the management of information systems within an information "
     "systems environment"),
)

SUBPOINT_IDS: tuple[str, ...] = tuple(d[0] for d in _SUBPOINT_DEFS)


def domain_for_so(so_id: int) -> NcaaaDomain:
    """NCAAA domain assigned to a student outcome by the mapping table."""
    try:
        return _SO_DOMAINS[so_id]
    except (KeyError, TypeError):
        raise UnknownOutcome(f"student outcome {so_id!r} is not one of 1..6") from None


class VerbRegistry:
    """Immutable lemma -> classification map with surface-form index."""

    def __init__(self, entries: Mapping[str, VerbEntry], rows: Mapping[str, tuple[str, ...]]):
        self._entries = dict(entries)
        self.rows = dict(rows)
        forms: dict[str, str] = {}
        for entry in self._entries.values():
            for form in entry.irregular_forms:
                forms[form] = entry.lemma
        self._forms = forms

    def __contains__(self, lemma: str) -> bool:
        return lemma in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def entry(self, lemma: str) -> VerbEntry | None:
        return self._entries.get(lemma)

    @property
    def lemmas(self) -> tuple[str, ...]:
        return tuple(self._entries)

    @property
    def forms(self) -> Mapping[str, str]:
        """Registered irregular surface form -> lemma."""
        return self._forms

    def classify(self, lemma: str) -> frozenset[LevelTag]:
        """Every (level, affective) pair assigned to a lemma; empty if unregistered."""
        entry = self._entries.get(lemma)
        if entry is None:
            return frozenset()
        return entry.tags()

    def levels(self, lemma: str) -> frozenset[BloomLevel]:
        entry = self._entries.get(lemma)
        return entry.levels if entry else frozenset()


def _validate_lemma(lemma: object) -> str:
    if not isinstance(lemma, str) or not lemma or lemma != lemma.lower() or any(c.isspace() for c in lemma):
        raise MalformedExtension(f"lemma must be a lowercase word, got {lemma!r}")
    return lemma


def _builtin_entries() -> dict[str, VerbEntry]:
    levels: dict[str, set[BloomLevel]] = {}
    affective_levels: dict[str, set[BloomLevel]] = {}
    affective: dict[str, bool] = {}
    for lemmas, level, is_affective in VERB_ROWS.values():
        for lemma in lemmas:
            levels.setdefault(lemma, set()).add(level)
            affective.setdefault(lemma, False)
            if is_affective:
                affective[lemma] = True
                affective_levels.setdefault(lemma, set()).add(level)
    entries: dict[str, VerbEntry] = {}
    for lemma in sorted(levels):
        forms = tuple(sorted(f for f, base in IRREGULAR_FORMS.items() if base == lemma))
        entries[lemma] = VerbEntry(
            lemma=lemma,
            levels=frozenset(levels[lemma]),
            affective=affective[lemma],
            affective_levels=frozenset(affective_levels.get(lemma, ())),
            irregular_forms=forms,
        )
    return entries


def _parse_extension_levels(raw: object) -> frozenset[BloomLevel]:
    if not isinstance(raw, list) or not raw:
        raise MalformedExtension(f"levels must be a non-empty list, got {raw!r}")
    out = set()
    for item in raw:
        try:
            out.add(BloomLevel.from_label(str(item)))
        except ValueError as exc:
            raise MalformedExtension(str(exc)) from None
    return frozenset(out)


def _merge_extension(entries: dict[str, VerbEntry], config: Mapping) -> dict[str, VerbEntry]:
    if not isinstance(config, Mapping):
        raise MalformedExtension("extension config must be a mapping document")
    schema = config.get("schema")
    if schema != "taxonomy-ext.v1":
        raise MalformedExtension(f"expected schema 'taxonomy-ext.v1', got {schema!r}")
    verbs = config.get("verbs")
    if not isinstance(verbs, list):
        raise MalformedExtension("extension config requires a 'verbs' list")
    unknown = set(config) - {"schema", "verbs"}
    if unknown:
        raise MalformedExtension(f"unknown extension fields: {sorted(unknown)}")

    known_forms = dict(IRREGULAR_FORMS)
    seen: set[str] = set()
    for item in verbs:
        if not isinstance(item, Mapping):
            raise MalformedExtension(f"verb entry must be an object, got {item!r}")
        bad = set(item) - {"lemma", "levels", "affective", "forms"}
        if bad:
            raise MalformedExtension(f"unknown verb entry fields: {sorted(bad)}")
        lemma = _validate_lemma(item.get("lemma"))
        if lemma in seen:
            raise MalformedExtension(f"lemma {lemma!r} declared twice in extension")
        seen.add(lemma)

        existing = entries.get(lemma)
        if "levels" in item:
            ext_levels = _parse_extension_levels(item["levels"])
        elif existing is not None:
            ext_levels = existing.levels  # forms-only addition
        else:
            raise MalformedExtension(f"new lemma {lemma!r} requires a levels list")

        ext_affective = item.get("affective")
        if ext_affective is not None and not isinstance(ext_affective, bool):
            raise MalformedExtension(f"affective must be a boolean, got {ext_affective!r}")

        if existing is not None:
            # Built-in rows can only grow: dropping a built-in level or
            # flipping affectivity contradicts embedded registry data.
            if not ext_levels >= existing.levels:
                missing = sorted(l.label for l in existing.levels - ext_levels)
                raise ConflictingExtension(
                    f"extension drops built-in level(s) {missing} for lemma {lemma!r}"
                )
            if ext_affective is not None and ext_affective != existing.affective:
                raise ConflictingExtension(
                    f"extension contradicts affective flag for lemma {lemma!r}"
                )
            merged_levels = existing.levels | ext_levels
            affective = existing.affective
            affective_levels = existing.affective_levels
        else:
            merged_levels = ext_levels
            affective = bool(ext_affective)
            affective_levels = ext_levels if affective else frozenset()

        forms = list(existing.irregular_forms) if existing is not None else []
        for form in item.get("forms", ()):
            form = _validate_lemma(form)
            target = known_forms.get(form)
            if target is not None and target != lemma:
                raise ConflictingExtension(
                    f"form {form!r} already maps to lemma {target!r}"
                )
            if form in entries and form != lemma:
                raise ConflictingExtension(
                    f"form {form!r} shadows a registered lemma"
                )
            known_forms[form] = lemma
            if form not in forms:
                forms.append(form)

        entries[lemma] = VerbEntry(
            lemma=lemma,
            levels=merged_levels,
            affective=affective,
            affective_levels=affective_levels,
            irregular_forms=tuple(forms),
        )
    return entries


def _build_subpoints() -> list[SubpointSpec]:
    subpoints = []
    for sp_id, row_key, any_level, description in _SUBPOINT_DEFS:
        lemmas, level, _ = VERB_ROWS[row_key]
        so_id = int(sp_id.split(".")[0])
        subpoints.append(
            SubpointSpec(
                id=sp_id,
                description=description,
                verb_row=lemmas,
                bloom_levels=frozenset() if any_level else frozenset({level}),
                so_id=so_id,
                ncaaa_domain=domain_for_so(so_id),
                any_level=any_level,
            )
        )
    return subpoints


def load_registry(
    extension_config: Mapping | None = None,
) -> tuple[VerbRegistry, list[SubpointSpec], MappingTables]:
    """Build the verb registry, subpoint catalog and mapping tables.

    The built-in data is embedded; an optional taxonomy-ext.v1 document may
    add lemmas, levels and surface forms, but can never remove or alter
    built-in classifications.
    """
    entries = _builtin_entries()
    if extension_config is not None:
        entries = _merge_extension(entries, extension_config)
    registry = VerbRegistry(entries, {k: v[0] for k, v in VERB_ROWS.items()})
    so_rows = {
        so: SoRow(so, _SO_TITLES[so], _SO_DOMAINS[so], _SO_LEVEL_LABELS[so])
        for so in range(1, 7)
    }
    tables = MappingTables(so_rows=so_rows, level_to_domain=dict(LEVEL_TO_DOMAIN))
    return registry, _build_subpoints(), tables


class Taxonomy:
    """Loaded registry + subpoint catalog + mapping tables, as one handle."""

    def __init__(self, registry: VerbRegistry, subpoints: Iterable[SubpointSpec], tables: MappingTables):
        self.registry = registry
        self.subpoints = {sp.id: sp for sp in subpoints}
        self.tables = tables

    @classmethod
    def load(cls, extension_config: Mapping | None = None) -> "Taxonomy":
        return cls(*load_registry(extension_config))

    def subpoint(self, subpoint_id: str) -> SubpointSpec:
        try:
            return self.subpoints[subpoint_id]
        except KeyError:
            raise UnknownSubpoint(f"subpoint {subpoint_id!r} is not in the catalog") from None

    def verbs_for_subpoint(self, subpoint_id: str) -> tuple[str, ...]:
        """The subpoint's approved verb row, in row order."""
        return self.subpoint(subpoint_id).verb_row

    def classify_verb(self, lemma: str) -> frozenset[LevelTag]:
        return self.registry.classify(lemma)

    def domain_for_so(self, so_id: int) -> NcaaaDomain:
        return domain_for_so(so_id)
