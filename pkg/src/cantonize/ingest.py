"""Election file parsing, name normalization, and cross-election panel alignment.

Input formats (all UTF-8, comma-delimited, header row first):

* election file:   ``name,eligible,total,<party-symbol>...``  (one file per election)
* bloc mapping:    ``party_symbol,bloc``
* alias table:     ``variant,canonical``
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from datetime import date

# Bloc order is fixed everywhere: vectors, seeds, profile rows.
BLOCS = ("Right", "Haredi", "Center", "Left", "Arab")
OTHER_BLOC = "Other"

# election_id -> (knesset number, election day)
ELECTION_INFO = {
    1: (21, date(2019, 4, 9)),
    2: (22, date(2019, 9, 17)),
    3: (23, date(2020, 3, 2)),
    4: (24, date(2021, 3, 23)),
    5: (25, date(2022, 11, 1)),
}


class IngestError(Exception):
    """Base class for ingest failures."""


class ParseError(IngestError):
    """Malformed input file (carries a line number when known)."""


class ValidationError(IngestError):
    """Structurally parseable input violating a count invariant."""


class AlignmentError(IngestError):
    """Municipality sets cannot be aligned across elections."""


# Unicode variants folded to plain ASCII before any comparison.
_QUOTE_VARIANTS = str.maketrans({c: "'" for c in "‘’‚ʼ′`׳"})
_DQUOTE_VARIANTS = str.maketrans({c: '"' for c in "“”„״"})
_HYPHEN_VARIANTS = str.maketrans({c: "-" for c in "‐‑‒–—―−"})
_WS_RE = re.compile(r"\s+")


def normalize_name(raw: str, aliases: dict[str, str] | None = None) -> str:
    """Normalize a municipality name for cross-dataset matching.

    Lowercases, trims, folds quote/apostrophe/hyphen variants, collapses
    internal whitespace, then applies the alias table (keyed by normalized
    variant). Total and idempotent.
    """
    s = raw.translate(_QUOTE_VARIANTS).translate(_DQUOTE_VARIANTS).translate(_HYPHEN_VARIANTS)
    s = _WS_RE.sub(" ", s).strip().lower()
    if aliases:
        s = aliases.get(s, s)
    return s


def parse_alias_table(text: str) -> dict[str, str]:
    """Parse a ``variant,canonical`` file into a lookup usable by normalize_name.

    Keys and values are themselves normalized; alias chains are resolved at
    load time so a single lookup is always final (keeps normalization
    idempotent). Cyclic chains are a parse error.
    """
    rows = _read_rows(text, expected_header=["variant", "canonical"])
    table: dict[str, str] = {}
    for lineno, row in rows:
        if len(row) != 2:
            raise ParseError(f"line {lineno}: expected 2 columns, got {len(row)}")
        variant = normalize_name(row[0])
        canonical = normalize_name(row[1])
        table[variant] = canonical
    resolved: dict[str, str] = {}
    for variant in table:
        target = table[variant]
        seen = {variant}
        while target in table and table[target] != target:
            if target in seen:
                raise ParseError(f"alias cycle involving '{variant}'")
            seen.add(target)
            target = table[target]
        resolved[variant] = target
    return resolved


@dataclass(frozen=True)
class BlocMapping:
    """Party symbol to political bloc lookup. Unmapped symbols fall to "Other"."""

    entries: dict[str, str]

    def __post_init__(self):
        bad = {b for b in self.entries.values() if b not in BLOCS}
        if bad:
            raise ValidationError(f"unknown bloc labels: {sorted(bad)} (expected one of {BLOCS})")

    def bloc_of(self, party_symbol: str) -> str:
        return self.entries.get(party_symbol, OTHER_BLOC)


def parse_bloc_mapping(text: str) -> BlocMapping:
    rows = _read_rows(text, expected_header=["party_symbol", "bloc"])
    entries = {}
    for lineno, row in rows:
        if len(row) != 2:
            raise ParseError(f"line {lineno}: expected 2 columns, got {len(row)}")
        entries[row[0].strip()] = row[1].strip()
    return BlocMapping(entries)


@dataclass(frozen=True)
class MunicipalityRow:
    raw_name: str
    normalized_name: str
    eligible_voters: int
    total_votes: int
    party_votes: dict[str, int]


@dataclass(frozen=True)
class ElectionDataset:
    election_id: int
    knesset_number: int
    date: date
    rows: list[MunicipalityRow]

    def by_name(self) -> dict[str, MunicipalityRow]:
        return {r.normalized_name: r for r in self.rows}


def parse_election_file(
    data: bytes | str,
    election_id: int,
    aliases: dict[str, str] | None = None,
) -> ElectionDataset:
    """Parse one election results file.

    Counts must be non-negative integers satisfying
    ``sum(party votes) <= total votes <= eligible voters`` per row, and
    normalized names must be unique within the file.
    """
    if election_id not in ELECTION_INFO:
        raise ValidationError(f"unknown election_id {election_id} (expected 1..5)")
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("line 1: missing header row") from None
    header = [h.strip() for h in header]
    if header[:3] != ["name", "eligible", "total"]:
        raise ParseError(f"line 1: header must start with name,eligible,total (got {header[:3]})")
    parties = header[3:]
    if len(set(parties)) != len(parties):
        raise ParseError("line 1: duplicate party symbols in header")

    rows = []
    seen: dict[str, int] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise ParseError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        raw_name = row[0].strip()
        if not raw_name:
            raise ParseError(f"line {lineno}: empty municipality name")
        counts = []
        for col, value in zip(header[1:], row[1:]):
            try:
                n = int(value)
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer count '{value}' in column {col}") from None
            if n < 0:
                raise ValidationError(f"line {lineno}: negative count {n} in column {col}")
            counts.append(n)
        eligible, total = counts[0], counts[1]
        party_votes = dict(zip(parties, counts[2:]))
        if total > eligible:
            raise ValidationError(f"line {lineno}: total votes {total} exceed eligible voters {eligible}")
        if sum(party_votes.values()) > total:
            raise ValidationError(f"line {lineno}: party votes sum to more than total votes {total}")
        name = normalize_name(raw_name, aliases)
        if name in seen:
            raise ValidationError(f"line {lineno}: duplicate municipality '{name}' (first on line {seen[name]})")
        seen[name] = lineno
        rows.append(MunicipalityRow(raw_name, name, eligible, total, party_votes))

    knesset, day = ELECTION_INFO[election_id]
    return ElectionDataset(election_id, knesset, day, rows)


@dataclass(frozen=True)
class AlignedPanel:
    """Per-municipality, per-election vote counts for a common municipality set.

    ``municipality_ids`` are normalized names in lexicographic order; every id
    appears in every election of ``election_ids``.
    """

    municipality_ids: list[str]
    election_ids: list[int]
    names: dict[str, str]
    eligible: dict[tuple[str, int], int]
    totals: dict[tuple[str, int], int]
    votes: dict[tuple[str, int], dict[str, int]] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.municipality_ids)

    @property
    def voter_weight(self) -> dict[str, float]:
        """Mean eligible-voter count per municipality across the panel's elections."""
        k = len(self.election_ids)
        return {
            m: sum(self.eligible[(m, e)] for e in self.election_ids) / k
            for m in self.municipality_ids
        }

    def party_symbols(self) -> list[str]:
        symbols = set()
        for pv in self.votes.values():
            symbols.update(pv)
        return sorted(symbols)

    def restrict(self, election_id: int) -> "AlignedPanel":
        """Single-election view with the same municipality set."""
        if election_id not in self.election_ids:
            raise ValidationError(f"election {election_id} not in panel")
        keep = [election_id]
        return AlignedPanel(
            municipality_ids=list(self.municipality_ids),
            election_ids=keep,
            names=dict(self.names),
            eligible={(m, e): v for (m, e), v in self.eligible.items() if e == election_id},
            totals={(m, e): v for (m, e), v in self.totals.items() if e == election_id},
            votes={(m, e): dict(v) for (m, e), v in self.votes.items() if e == election_id},
        )

    def to_datasets(self) -> list[ElectionDataset]:
        """Project the panel back into one ElectionDataset per election."""
        out = []
        for e in self.election_ids:
            knesset, day = ELECTION_INFO[e]
            rows = [
                MunicipalityRow(
                    raw_name=self.names[m],
                    normalized_name=m,
                    eligible_voters=self.eligible[(m, e)],
                    total_votes=self.totals[(m, e)],
                    party_votes=dict(self.votes[(m, e)]),
                )
                for m in self.municipality_ids
            ]
            out.append(ElectionDataset(e, knesset, day, rows))
        return out


def align_panel(datasets: list[ElectionDataset]) -> AlignedPanel:
    """Align municipalities across all elections into a single panel.

    Keeps the intersection of normalized names; display names come from the
    most recent election. Raises AlignmentError when the intersection is
    empty, listing per-dataset row counts.
    """
    if len(datasets) != 5:
        raise ValidationError(f"expected 5 election datasets, got {len(datasets)}")
    for ds in datasets:
        if not ds.rows:
            raise ValidationError(f"election {ds.election_id} has no rows")
    ids = [ds.election_id for ds in datasets]
    if len(set(ids)) != len(ids):
        raise ValidationError(f"duplicate election ids: {ids}")

    by_name = {ds.election_id: ds.by_name() for ds in datasets}
    common = set.intersection(*(set(m) for m in by_name.values()))
    if not common:
        counts = ", ".join(f"election {ds.election_id}: {len(ds.rows)} rows" for ds in datasets)
        raise AlignmentError(f"no municipality appears in all elections ({counts})")

    municipality_ids = sorted(common)
    latest = max(datasets, key=lambda ds: ds.election_id)
    names = {m: latest.by_name()[m].raw_name for m in municipality_ids}
    eligible, totals, votes = {}, {}, {}
    for ds in datasets:
        lookup = by_name[ds.election_id]
        for m in municipality_ids:
            row = lookup[m]
            eligible[(m, ds.election_id)] = row.eligible_voters
            totals[(m, ds.election_id)] = row.total_votes
            votes[(m, ds.election_id)] = dict(row.party_votes)
    return AlignedPanel(municipality_ids, sorted(ids), names, eligible, totals, votes)


def bloc_vote_shares(panel: AlignedPanel, mapping: BlocMapping, election_id: int) -> dict[str, tuple[float, ...]]:
    """Bloc vote shares per municipality for one election.

    Shares are bloc votes divided by total party votes; "Other" votes stay in
    the denominator, so a 5-vector may sum to less than 1.
    """
    if election_id not in panel.election_ids:
        raise ValidationError(f"election {election_id} not in panel")
    out = {}
    for m in panel.municipality_ids:
        pv = panel.votes[(m, election_id)]
        denom = sum(pv.values())
        if denom == 0:
            raise ValidationError(f"municipality '{m}' has zero total votes in election {election_id}")
        sums = dict.fromkeys(BLOCS, 0)
        for party, count in pv.items():
            bloc = mapping.bloc_of(party)
            if bloc in sums:
                sums[bloc] += count
        out[m] = tuple(sums[b] / denom for b in BLOCS)
    return out


def mean_bloc_shares(panel: AlignedPanel, mapping: BlocMapping) -> dict[str, tuple[float, ...]]:
    """Bloc shares averaged across the panel's elections."""
    per_election = [bloc_vote_shares(panel, mapping, e) for e in panel.election_ids]
    k = len(per_election)
    return {
        m: tuple(sum(shares[m][j] for shares in per_election) / k for j in range(len(BLOCS)))
        for m in panel.municipality_ids
    }


def panel_to_json(panel: AlignedPanel) -> str:
    payload = {
        "municipality_ids": panel.municipality_ids,
        "election_ids": panel.election_ids,
        "names": panel.names,
        "elections": {
            str(e): {
                m: {
                    "eligible": panel.eligible[(m, e)],
                    "total": panel.totals[(m, e)],
                    "party_votes": panel.votes[(m, e)],
                }
                for m in panel.municipality_ids
            }
            for e in panel.election_ids
        },
    }
    return json.dumps(payload)


def panel_from_json(text: str) -> AlignedPanel:
    payload = json.loads(text)
    eligible, totals, votes = {}, {}, {}
    for e_str, rows in payload["elections"].items():
        e = int(e_str)
        for m, row in rows.items():
            eligible[(m, e)] = row["eligible"]
            totals[(m, e)] = row["total"]
            votes[(m, e)] = row["party_votes"]
    return AlignedPanel(
        municipality_ids=payload["municipality_ids"],
        election_ids=payload["election_ids"],
        names=payload["names"],
        eligible=eligible,
        totals=totals,
        votes=votes,
    )


def _read_rows(text: str, expected_header: list[str]):
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("line 1: missing header row") from None
    if header != expected_header:
        raise ParseError(f"line 1: expected header {expected_header}, got {header}")
    out = []
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        out.append((lineno, row))
    return out
