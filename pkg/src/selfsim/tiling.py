"""Wang-tile translation of transducer dynamics.

A finite-state transducer over alphabet ``A`` and states ``S`` turns
into a tileset over the colour set ``C = A ⊔ S``: each transition
``Φ(a, s) = (s', a')`` becomes a tile with north/east/south/west
colours ``s', a', s, a``, and every pair ``(c, d)`` outside ``S × A``
gets a diagonal tile ``(c, d, c, d)``.  Rows of a tiling then replay
the transducer: a row of states reading a letter from the west emits
its image east and its sections north.

Half-plane tilings are never materialised; the probe only ever builds
finite row windows, which is all the periodicity criterion needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .order import OrderResult, order
from .transducer import FINITE_STATE, Transducer

_SIDES = ("N", "E", "S", "W")


@dataclass(frozen=True, order=True)
class WangTile:
    """A unit square with one colour per side."""

    north: str
    east: str
    south: str
    west: str

    def side(self, name: str) -> str:
        if name not in _SIDES:
            raise ValueError(f"unknown side {name!r}; expected one of {_SIDES}")
        return {
            "N": self.north,
            "E": self.east,
            "S": self.south,
            "W": self.west,
        }[name]


@dataclass(frozen=True)
class Tileset:
    colours: Tuple[str, ...]
    tiles: Tuple[WangTile, ...]

    def __post_init__(self) -> None:
        if len(set(self.tiles)) != len(self.tiles):
            raise ValueError("duplicate tiles")
        palette = set(self.colours)
        for tile in self.tiles:
            for side in _SIDES:
                if tile.side(side) not in palette:
                    raise ValueError(
                        f"tile {tile} uses undeclared colour {tile.side(side)!r}"
                    )

    def __len__(self) -> int:
        return len(self.tiles)

    def to_text(self) -> str:
        """One tile per line, sides in N E S W order."""
        lines = [
            f"{t.north} {t.east} {t.south} {t.west}" for t in self.tiles
        ]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TilesetCheck:
    """Outcome of a λμ-determinism or completeness check."""

    ok: bool
    counterexample: Optional[Tuple[str, str]] = None

    def __bool__(self) -> bool:
        return self.ok


def tileset_from_transducer(t: Transducer) -> Tileset:
    """Tileset over ``A ⊔ S`` whose rows simulate ``t``.

    >>> from .zoo import grigorchuk
    >>> len(tileset_from_transducer(grigorchuk()))
    49
    """
    if t.kind != FINITE_STATE:
        raise ValueError("tileset construction requires a finite-state transducer")
    letters = t.alphabet.letters
    names = t.states.names
    overlap = set(letters) & set(names)
    if overlap:
        raise ValueError(
            f"letters and states must be disjoint colours; both use {sorted(overlap)}"
        )
    identity_names = [n for n in names if n in t.states.identity]

    tiles: List[WangTile] = []
    for s in names:
        for a in letters:
            out, b = t.transition(a, s)
            if out.refs:
                north = t.states.name(out.refs[0])
            elif identity_names:
                north = identity_names[0]
            else:
                raise ValueError(
                    f"transition ({a!r}, {s!r}) erases its output and no "
                    "identity state is available to colour the north side"
                )
            tiles.append(WangTile(north, b, s, a))

    colours = letters + names
    state_set = set(names)
    letter_set = set(letters)
    for c in colours:
        for d in colours:
            if c in state_set and d in letter_set:
                continue
            tiles.append(WangTile(c, d, c, d))
    return Tileset(colours, tuple(tiles))


def check_tileset_property(
    ts: Tileset, sides: Tuple[str, str] = ("S", "W"), prop: str = "complete"
) -> TilesetCheck:
    """Exhaustively test λμ-determinism or λμ-completeness.

    ``deterministic`` asks for at most one tile per colour pair on the
    two given sides, ``complete`` for exactly one.  The counterexample
    names the offending pair.
    """
    lam, mu = sides
    for side in (lam, mu):
        if side not in _SIDES:
            raise ValueError(f"unknown side {side!r}; expected one of {_SIDES}")
    if lam == mu:
        raise ValueError("the two sides must differ")
    if prop not in ("deterministic", "complete"):
        raise ValueError(f"unknown property {prop!r}")

    counts: Dict[Tuple[str, str], int] = {}
    for tile in ts.tiles:
        key = (tile.side(lam), tile.side(mu))
        counts[key] = counts.get(key, 0) + 1

    for c in ts.colours:
        for d in ts.colours:
            n = counts.get((c, d), 0)
            if n > 1:
                return TilesetCheck(False, (c, d))
            if n == 0 and prop == "complete":
                return TilesetCheck(False, (c, d))
    return TilesetCheck(True)


def forced_rows(
    ts: Tileset, axis: str, west: str, width: int, count: int
) -> List[List[WangTile]]:
    """Rows of the unique SW-forced tiling window: row 0 sits on a
    baseline of ``axis`` colours, each row starts with ``west`` on its
    left edge, and every tile is the unique one matching its south and
    west constraints.
    """
    index: Dict[Tuple[str, str], WangTile] = {}
    for tile in ts.tiles:
        key = (tile.south, tile.west)
        if key in index:
            raise ValueError(f"tileset is not SW-deterministic at {key}")
        index[key] = tile

    souths = [axis] * width
    rows: List[List[WangTile]] = []
    for _ in range(count):
        row: List[WangTile] = []
        incoming = west
        for south in souths:
            tile = index.get((south, incoming))
            if tile is None:
                raise ValueError(f"no tile with south {south!r} and west {incoming!r}")
            row.append(tile)
            incoming = tile.east
        rows.append(row)
        souths = [tile.north for tile in row]
    return rows


def periodicity_probe(t: Transducer, c: str, budget: int = 1000) -> OrderResult:
    """Order of state ``c``, phrased through tilings: every half-plane
    tiling with ``c`` along the axis is horizontally n-periodic exactly
    when ``c`` has finite order ``n``.

    Delegates to the order engine; a ``Finite(n)`` answer is re-checked
    by building five rows of the SW-forced window of width ``2n`` and
    confirming each is n-periodic.
    """
    if c not in t.states:
        raise ValueError(f"{c!r} is not a state")
    result = order(t, t.states.word((c,)), budget=budget)
    if result.is_finite:
        n = result.n
        ts = tileset_from_transducer(t)
        rows = forced_rows(ts, c, t.alphabet.letters[0], 2 * n, 5)
        for r, row in enumerate(rows):
            for j in range(n):
                if row[j] != row[j + n]:
                    raise RuntimeError(
                        f"forced row {r} is not {n}-periodic at column {j}"
                    )
    return result
