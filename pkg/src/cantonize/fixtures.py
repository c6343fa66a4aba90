"""Deterministic synthetic datasets in the artifact's input formats.

Two generators: a full 229-municipality dataset whose per-election national
totals match the real published figures, and a small planted 6x4 lattice with
three feature-separated contiguous blocks for algorithm recovery tests.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .ingest import BLOCS

ELECTION_ELIGIBLE = {1: 6_014_124, 2: 6_061_316, 3: 6_118_607, 4: 6_232_307, 5: 6_426_211}
ELECTION_ACTUAL = {1: 3_873_326, 2: 3_950_538, 3: 4_048_714, 4: 3_781_640, 5: 4_084_119}

# party -> (bloc, elections present, share of its bloc's vote)
PARTIES = {
    "likud": ("Right", (1, 2, 3, 4, 5), 0.55),
    "yisrael_beiteinu": ("Right", (1, 2, 3, 4, 5), 0.20),
    "yamina": ("Right", (1, 2, 3, 4), 0.10),
    "religious_zionism": ("Right", (3, 4, 5), 0.15),
    "shas": ("Haredi", (1, 2, 3, 4, 5), 0.55),
    "utj": ("Haredi", (1, 2, 3, 4, 5), 0.45),
    "yesh_atid": ("Center", (1, 2, 3, 4, 5), 0.60),
    "blue_white": ("Center", (1, 2, 3), 0.40),
    "national_unity": ("Center", (4, 5), 0.40),
    "labor": ("Left", (1, 2, 3, 4, 5), 0.60),
    "meretz": ("Left", (1, 2, 3, 4), 0.40),
    "joint_list": ("Arab", (1, 2, 3, 4), 0.60),
    "raam": ("Arab", (2, 3, 4, 5), 0.40),
    "balad": ("Arab", (5,), 0.30),
    "pirate": ("Other", (1, 2, 3, 4, 5), 1.00),  # deliberately unmapped
}

REGION_PROFILES = {
    "center": {"Right": 0.28, "Haredi": 0.08, "Center": 0.45, "Left": 0.12, "Arab": 0.02},
    "south": {"Right": 0.52, "Haredi": 0.14, "Center": 0.20, "Left": 0.06, "Arab": 0.02},
    "haredi_enclave": {"Right": 0.12, "Haredi": 0.74, "Center": 0.04, "Left": 0.02, "Arab": 0.01},
    "north": {"Right": 0.40, "Haredi": 0.05, "Center": 0.30, "Left": 0.10, "Arab": 0.10},
    "arab_galilee": {"Right": 0.019, "Haredi": 0.011, "Center": 0.022, "Left": 0.038, "Arab": 0.899},
    "arab_periphery": {"Right": 0.022, "Haredi": 0.010, "Center": 0.043, "Left": 0.050, "Arab": 0.861},
    # No bloc above the 70% dominance threshold: a detached component with
    # this profile is only reachable through a bridge edge.
    "mixed_periphery": {"Right": 0.35, "Haredi": 0.05, "Center": 0.33, "Left": 0.12, "Arab": 0.08},
}

# Per-election national mood: added to Right, subtracted from Center.
ELECTION_SWING = {1: 0.010, 2: -0.008, 3: 0.014, 4: -0.012, 5: 0.018}

# Municipality whose election-1 ballot is pinned so its Arab bloc share is
# exactly 899/1000 (raam is absent from election 1, joint_list carries all
# Arab votes).
PINNED_ARAB_MUNI = "Galilee Village 01"
PINNED_ARAB_VOTES = {"joint_list": 899, "likud": 19, "shas": 11,
                     "yesh_atid": 22, "labor": 38, "pirate": 11}

CELL = 0.05  # polygon edge length in degrees


def _largest_remainder(weights: np.ndarray, total: int) -> np.ndarray:
    """Integer allocation proportional to weights, summing exactly to total."""
    raw = weights / weights.sum() * total
    base = np.floor(raw).astype(np.int64)
    short = total - int(base.sum())
    order = np.argsort(-(raw - base), kind="stable")
    base[order[:short]] += 1
    return base


def _square(col: int, row: int, x0: float = 34.0, y0: float = 29.5) -> list[list[float]]:
    x = x0 + col * CELL
    y = y0 + row * CELL
    return [[x, y], [x + CELL, y], [x + CELL, y + CELL], [x, y + CELL], [x, y]]


def _snake_cells(count: int, width: int) -> list[tuple[int, int]]:
    cells = []
    for i in range(count):
        row, pos = divmod(i, width)
        col = pos if row % 2 == 0 else width - 1 - pos
        cells.append((col, row))
    return cells


def _party_split(bloc_shares: dict[str, float], other: float, election: int) -> dict[str, float]:
    """Expand bloc-level shares into party-level shares for one election."""
    out = {}
    for bloc in BLOCS:
        present = [
            (p, frac) for p, (b, elections, frac) in PARTIES.items()
            if b == bloc and election in elections
        ]
        total_frac = sum(f for _, f in present)
        for p, frac in present:
            out[p] = bloc_shares[bloc] * frac / total_frac
    out["pirate"] = other
    return out


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(x) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class _MuniSpec:
    def __init__(self, display: str, region: str, size_weight: float, cell, group: str):
        self.display = display
        self.region = region
        self.size_weight = size_weight
        self.cell = cell      # (col, row, x0, y0) or None for geo-only handling
        self.group = group    # main / clump / island


def _build_munis(rng: np.random.Generator) -> list[_MuniSpec]:
    munis: list[_MuniSpec] = []

    def add(display, region, mean_size, group="main"):
        size = float(rng.lognormal(mean=np.log(mean_size), sigma=0.55))
        munis.append(_MuniSpec(display, region, size, None, group))

    for i in range(54):
        add(f"South Town {i + 1:02d}", "south", 18_000)
    for i in range(6):
        add(f"Haredi Town {i + 1:02d}", "haredi_enclave", 35_000)
    for i in range(33):
        add(f"Center City {i + 1:02d}", "center", 60_000)
    add("Tel Aviv - Yafo", "center", 320_000)
    for i in range(76):
        add(f"North Town {i + 1:02d}", "north", 20_000)
    for i in range(43):
        add(f"Galilee Village {i + 1:02d}", "arab_galilee", 12_000)
    for i in range(12):
        add(f"Periphery Village {i + 1:02d}", "arab_periphery", 9_000)
    for i in range(3):
        add(f"Desert Cluster {i + 1:02d}", "mixed_periphery", 8_000, group="clump")
    add("Far Oasis", "arab_periphery", 7_000, group="island")
    return munis


def generate_dataset(out_dir: str | Path, seed: int = 7) -> Path:
    """Write the full synthetic dataset (5 elections, 229 municipalities,
    234 boundary polygons, bloc mapping, alias table) into ``out_dir``.

    National eligible/actual totals match the published per-election figures
    exactly. The polygon map is one large contiguous block plus a detached
    3-cell cluster and a detached single island, so graph augmentation has
    real work to do.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    munis = _build_munis(rng)
    n = len(munis)
    assert n == 229

    sizes = np.array([m.size_weight for m in munis])
    muni_jitter = rng.normal(0.0, 0.008, size=(n, len(BLOCS)))
    turnout_jitter = rng.uniform(-0.05, 0.05, size=n)

    # Election files. Flooring keeps sum(party) <= total by construction.
    for e in range(1, 6):
        parties = [p for p, (_, pres, _) in PARTIES.items() if e in pres]
        eligible = _largest_remainder(sizes, ELECTION_ELIGIBLE[e])
        global_turnout = ELECTION_ACTUAL[e] / ELECTION_ELIGIBLE[e]
        desired = eligible * np.clip(global_turnout + turnout_jitter, 0.30, 0.95)
        totals = _largest_remainder(desired, ELECTION_ACTUAL[e])
        totals = np.minimum(totals, eligible)
        deficit = ELECTION_ACTUAL[e] - int(totals.sum())
        i = 0
        while deficit > 0:
            if totals[i % n] < eligible[i % n]:
                totals[i % n] += 1
                deficit -= 1
            i += 1

        if e == 1:
            # The pinned ballot needs at least its 1,000 party votes; keep the
            # national sum exact by shifting any shortfall to the largest town.
            pin = next(i for i, m in enumerate(munis) if m.display == PINNED_ARAB_MUNI)
            need = sum(PINNED_ARAB_VOTES.values())
            if totals[pin] < need:
                delta = need - totals[pin]
                donor = int(np.argmax(totals))
                totals[pin] += delta
                totals[donor] -= delta

        rows = []
        for i, spec in enumerate(munis):
            profile = dict(REGION_PROFILES[spec.region])
            swing = ELECTION_SWING[e]
            profile["Right"] = max(profile["Right"] + swing, 0.001)
            profile["Center"] = max(profile["Center"] - swing, 0.001)
            for j, bloc in enumerate(BLOCS):
                profile[bloc] = max(profile[bloc] + muni_jitter[i, j], 0.0)
            total_bloc = sum(profile.values())
            other = max(1.0 - total_bloc, 0.01)
            scale = 1.0 / (total_bloc + other)
            shares = _party_split({b: profile[b] * scale for b in BLOCS}, other * scale, e)

            if spec.display == PINNED_ARAB_MUNI and e == 1:
                party_votes = {p: PINNED_ARAB_VOTES.get(p, 0) for p in parties}
            else:
                party_votes = {p: int(totals[i] * shares[p]) for p in parties}
            rows.append([spec.display, int(eligible[i]), int(totals[i])] + [party_votes[p] for p in parties])
        _write_csv(out / f"election_{e}.csv", ["name", "eligible", "total"] + parties, rows)

    _write_csv(
        out / "blocs.csv",
        ["party_symbol", "bloc"],
        [[p, bloc] for p, (bloc, _, _) in PARTIES.items() if bloc != "Other"],
    )
    _write_csv(
        out / "aliases.csv",
        ["variant", "canonical"],
        [
            ["tel-aviv-yafo", "tel aviv - yafo"],
            ["t.a. yafo", "tel aviv - yafo"],
            ["far oasis village", "far oasis"],
        ],
    )

    # Geography: snake-fill a 16-wide grid with the main municipalities plus
    # five geo-only reserves, then place the clump and island far away.
    main = [m for m in munis if m.group == "main"]
    clump = [m for m in munis if m.group == "clump"]
    island = [m for m in munis if m.group == "island"]
    features = []
    cells = _snake_cells(len(main) + 5, width=16)
    geo_names = [m.display for m in main] + [f"Regional Reserve {c}" for c in "ABCDE"]
    for (col, row), name in zip(cells, geo_names):
        if name == "Tel Aviv - Yafo":
            name = "Tel-Aviv–Yafo"  # alias-table exercise
        features.append({
            "type": "Feature",
            "properties": {"name": name},
            "geometry": {"type": "Polygon", "coordinates": [_square(col, row)]},
        })
    for k, spec in enumerate(clump):
        features.append({
            "type": "Feature",
            "properties": {"name": spec.display},
            "geometry": {"type": "Polygon", "coordinates": [_square(20 + k, 2, x0=36.0)]},
        })
    features.append({
        "type": "Feature",
        "properties": {"name": island[0].display},
        "geometry": {"type": "Polygon", "coordinates": [_square(30, 12, x0=36.5)]},
    })
    geo = {"type": "FeatureCollection", "features": features}
    (out / "municipalities.geojson").write_text(json.dumps(geo), encoding="utf-8")
    return out


LATTICE_BLOCKS = {
    "alpha": {"Right": 0.72, "Haredi": 0.05, "Center": 0.10, "Left": 0.05, "Arab": 0.03},
    "bravo": {"Right": 0.10, "Haredi": 0.72, "Center": 0.08, "Left": 0.03, "Arab": 0.02},
    "charlie": {"Right": 0.08, "Haredi": 0.04, "Center": 0.74, "Left": 0.08, "Arab": 0.01},
}


def lattice_expected_assignment() -> dict[str, int]:
    """Planted block label per lattice municipality (0=alpha, 1=bravo, 2=charlie)."""
    out = {}
    for b, block in enumerate(LATTICE_BLOCKS):
        for i in range(8):
            out[f"{block} {i + 1:02d}"] = b
    return out


def generate_lattice(out_dir: str | Path, seed: int = 11, jitter: float = 0.006) -> Path:
    """Write the planted 6x4 lattice dataset into ``out_dir``.

    Columns 0-1, 2-3, 4-5 form three politically distinct blocks (Right-,
    Haredi-, and Center-dominant). Every municipality keeps one fixed profile
    offset across all five elections and the per-election swing is shared
    within a block, so the planted blocks are the unambiguous optimum for
    homogeneity, balance (equal populations), and cut alike.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    names, blocks, cells = [], [], []
    for col in range(6):
        block = ("alpha", "bravo", "charlie")[col // 2]
        for row in range(4):
            i = (col % 2) * 4 + row
            names.append(f"{block} {i + 1:02d}")
            blocks.append(block)
            cells.append((col, row))

    n = len(names)
    offsets = rng.normal(0.0, jitter, size=(n, len(BLOCS)))
    # Fixed sub-block contrast (north vs south half of each block): gives the
    # lattice a stable finer-grained structure that high-resolution community
    # detection resolves the same way in every election.
    dominant = {"alpha": "Right", "bravo": "Haredi", "charlie": "Center"}
    for i in range(n):
        j = BLOCS.index(dominant[blocks[i]])
        offsets[i, j] += 0.025 if cells[i][1] < 2 else -0.025
    swings = {
        (block, e): rng.normal(0.0, jitter, size=len(BLOCS))
        for block in LATTICE_BLOCKS
        for e in range(1, 6)
    }

    for e in range(1, 6):
        parties = [p for p, (_, pres, _) in PARTIES.items() if e in pres]
        rows = []
        for i in range(n):
            eligible = int(10_000 * (1.0 + 0.01 * e))
            total = int(eligible * 0.65)
            profile = dict(LATTICE_BLOCKS[blocks[i]])
            swing = swings[(blocks[i], e)]
            for j, bloc in enumerate(BLOCS):
                profile[bloc] = max(profile[bloc] + offsets[i, j] + swing[j], 0.0)
            bloc_total = sum(profile.values())
            other = max(1.0 - bloc_total, 0.01)
            scale = 1.0 / (bloc_total + other)
            shares = _party_split({b: profile[b] * scale for b in BLOCS}, other * scale, e)
            votes = [int(total * shares[p]) for p in parties]
            rows.append([names[i], eligible, total] + votes)
        _write_csv(out / f"election_{e}.csv", ["name", "eligible", "total"] + parties, rows)

    _write_csv(
        out / "blocs.csv",
        ["party_symbol", "bloc"],
        [[p, bloc] for p, (bloc, _, _) in PARTIES.items() if bloc != "Other"],
    )
    _write_csv(out / "aliases.csv", ["variant", "canonical"], [])

    features = [
        {
            "type": "Feature",
            "properties": {"name": names[i]},
            "geometry": {"type": "Polygon", "coordinates": [_square(col, row)]},
        }
        for i, (col, row) in enumerate(cells)
    ]
    (out / "municipalities.geojson").write_text(
        json.dumps({"type": "FeatureCollection", "features": features}), encoding="utf-8"
    )
    return out
