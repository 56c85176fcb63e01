"""Finitely generated groups with computable normal forms.

Supported families: free groups, free-abelian groups, and free products of
such atoms.  An element is a canonical word over a symmetrized single-letter
alphabet; the formal inverse of a lowercase generator is its uppercase twin.
Left cosets of a designated peripheral atom are enumerated with shortlex-least
representatives and round-robin interleaved indices.
"""

from __future__ import annotations

import csv
import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BudgetExceededError, UnknownLetterError, vertex_budget

_FREE_POOL = "abcdefgh"
_ABELIAN_POOL = "xyzuvw"


@dataclass(frozen=True)
class Atom:
    """One free factor: a free or free-abelian group with named generators."""

    kind: str  # "free" | "abelian"
    letters: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in ("free", "abelian"):
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if not self.letters:
            raise ValueError("atom needs at least one generator")
        for s in self.letters:
            if len(s) != 1 or not s.islower():
                raise ValueError(f"generator names must be single lowercase letters, got {s!r}")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("duplicate generator names in atom")

    @property
    def rank(self) -> int:
        return len(self.letters)


class GroupSpec:
    """A free product of free / free-abelian atoms with a symmetrized alphabet.

    The alphabet lists, for each atom in order, each generator followed by its
    formal inverse, e.g. ``(x, X, y, Y, t, T)``.  Words are plain strings over
    this alphabet; ``normal_form`` returns the canonical representative.
    """

    def __init__(self, atoms: Sequence[Atom]):
        atoms = tuple(atoms)
        if not atoms:
            raise ValueError("need at least one atom")
        seen = set()
        for a in atoms:
            for s in a.letters:
                if s in seen:
                    raise ValueError(f"generator {s!r} used by two atoms")
                seen.add(s)
        self.atoms = atoms
        alphabet = []
        atom_of = {}
        for i, a in enumerate(atoms):
            for s in a.letters:
                alphabet.extend((s, s.upper()))
                atom_of[s] = i
                atom_of[s.upper()] = i
        self.alphabet: tuple[str, ...] = tuple(alphabet)
        self._atom_of = atom_of
        self._pos = {c: i for i, c in enumerate(self.alphabet)}

    # -- constructors -----------------------------------------------------

    @staticmethod
    def free(rank: int, names: Sequence[str] | None = None) -> "GroupSpec":
        """Free group of the given rank, one rank-1 atom per generator.

        Splitting into rank-1 atoms leaves normal forms and the word metric
        unchanged and makes every cyclic factor available as a peripheral.
        """
        names = tuple(names) if names else tuple(_FREE_POOL[:rank])
        if len(names) != rank:
            raise ValueError("need one name per generator")
        return GroupSpec([Atom("free", (s,)) for s in names])

    @staticmethod
    def free_abelian(rank: int, names: Sequence[str] | None = None) -> "GroupSpec":
        names = tuple(names) if names else tuple(_ABELIAN_POOL[:rank])
        if len(names) != rank:
            raise ValueError("need one name per generator")
        return GroupSpec([Atom("abelian", names)])

    @staticmethod
    def free_product(*parts: "GroupSpec") -> "GroupSpec":
        atoms = []
        for p in parts:
            atoms.extend(p.atoms)
        return GroupSpec(atoms)

    @staticmethod
    def from_config(cfg) -> tuple["GroupSpec", tuple[int, ...]]:
        """Read a spec and peripheral atom indices from a config mapping or JSON path."""
        if isinstance(cfg, (str, bytes)):
            with open(cfg) as fh:
                cfg = json.load(fh)
        family = cfg["family"]
        if family == "free":
            spec = GroupSpec.free(int(cfg["rank"]), cfg.get("names"))
        elif family == "free-abelian":
            spec = GroupSpec.free_abelian(int(cfg["rank"]), cfg.get("names"))
        elif family == "free-product":
            atoms = []
            for a in cfg["atoms"]:
                names = a.get("names")
                if a["kind"] == "free":
                    atoms.extend(GroupSpec.free(int(a["rank"]), names).atoms)
                elif a["kind"] == "free-abelian":
                    atoms.extend(GroupSpec.free_abelian(int(a["rank"]), names).atoms)
                else:
                    raise ValueError(f"unknown atom kind {a['kind']!r}")
            spec = GroupSpec(atoms)
        else:
            raise ValueError(f"unknown family {family!r}")
        peripherals = tuple(int(i) for i in cfg.get("peripherals", ()))
        for i in peripherals:
            if not 0 <= i < len(spec.atoms):
                raise ValueError(f"peripheral atom index {i} out of range")
        return spec, peripherals

    # -- words -------------------------------------------------------------

    def check_letters(self, word: Iterable[str]):
        for c in word:
            if c not in self._atom_of:
                raise UnknownLetterError(c)

    def atom_of(self, letter: str) -> int:
        try:
            return self._atom_of[letter]
        except KeyError:
            raise UnknownLetterError(letter) from None

    def _canon_syllable(self, atom_idx: int, letters: str) -> str:
        atom = self.atoms[atom_idx]
        if atom.kind == "abelian":
            exps = {s: 0 for s in atom.letters}
            for c in letters:
                exps[c.lower()] += 1 if c.islower() else -1
            out = []
            for s in atom.letters:
                e = exps[s]
                out.append((s if e > 0 else s.upper()) * abs(e))
            return "".join(out)
        # free atom: stack reduction
        stack: list[str] = []
        for c in letters:
            if stack and stack[-1] == c.swapcase():
                stack.pop()
            else:
                stack.append(c)
        return "".join(stack)

    def normal_form(self, word: Iterable[str]) -> str:
        """Canonical form: per-atom reduction with cascading syllable merges."""
        letters = word if isinstance(word, str) else "".join(word)
        self.check_letters(letters)
        # group consecutive same-atom letters into runs
        runs: list[tuple[int, str]] = []
        for c in letters:
            i = self._atom_of[c]
            if runs and runs[-1][0] == i:
                runs[-1] = (i, runs[-1][1] + c)
            else:
                runs.append((i, c))
        # reduce; a vanishing syllable may expose a same-atom merge with the
        # previous result entry, which the next run then absorbs
        result: list[tuple[int, str]] = []
        for atom_idx, raw in runs:
            if result and result[-1][0] == atom_idx:
                raw = result.pop()[1] + raw
            canon = self._canon_syllable(atom_idx, raw)
            if canon:
                result.append((atom_idx, canon))
        return "".join(s for _, s in result)

    def inverse(self, word: str) -> str:
        return self.normal_form(word.swapcase()[::-1])

    def multiply(self, a: str, b: str) -> str:
        return self.normal_form(a + b)

    def word_metric(self, x: str, y: str) -> int:
        """Left-invariant word metric: geodesic length of x^-1 y."""
        return len(self.normal_form(self.inverse(x) + y))

    def syllables(self, word: str) -> list[tuple[int, str]]:
        """Split a canonical word into (atom index, syllable) pairs."""
        out: list[tuple[int, str]] = []
        for c in word:
            i = self._atom_of[c]
            if out and out[-1][0] == i:
                out[-1] = (i, out[-1][1] + c)
            else:
                out.append((i, c))
        return out

    def shortlex_key(self, word: str):
        return (len(word), tuple(self._pos[c] for c in word))

    # -- balls and cosets --------------------------------------------------

    def ball(self, radius: int, budget: int | None = None) -> list[str]:
        """All elements with word length <= radius, in BFS discovery order."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        cap = vertex_budget(budget)
        seen = {""}
        order = [""]
        frontier = deque([""])
        depth = {"": 0}
        while frontier:
            w = frontier.popleft()
            if depth[w] == radius:
                continue
            for c in self.alphabet:
                nxt = self.normal_form(w + c)
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > cap:
                        raise BudgetExceededError(
                            f"ball of radius {radius} exceeds vertex budget {cap}"
                        )
                    depth[nxt] = depth[w] + 1
                    order.append(nxt)
                    frontier.append(nxt)
        return order

    def in_atom(self, word: str, atom_idx: int) -> bool:
        """True if the canonical word lies in the given atom's subgroup."""
        w = self.normal_form(word)
        return all(self._atom_of[c] == atom_idx for c in w)

    def coset_rep(self, word: str, atom_idx: int) -> str:
        """Shortlex-least representative of word * <atom>.

        Stripping a trailing syllable of the atom leaves the unique shortest
        element of the coset, since appending any nontrivial atom element
        extends the normal form syllable-wise.
        """
        w = self.normal_form(word)
        syl = self.syllables(w)
        if syl and syl[-1][0] == atom_idx:
            syl = syl[:-1]
        return "".join(s for _, s in syl)


@dataclass(frozen=True)
class CosetEntry:
    index: int  # global index, = a*k + r with r the 1-based peripheral slot
    rep: str  # shortlex-least representative
    slot: int  # 1-based position within the peripheral list
    atom: int  # atom index of the peripheral subgroup


@dataclass(frozen=True)
class CosetTable:
    """Cosets of the peripheral atoms meeting a word-metric ball.

    Entries carry global indices ``a*k + r`` so that index mod k identifies
    the peripheral; indices whose coset does not meet the ball are skipped.
    """

    entries: tuple[CosetEntry, ...]
    peripherals: tuple[int, ...]
    radius: int

    def __len__(self):
        return len(self.entries)

    def rep_of(self, index: int) -> str:
        for e in self.entries:
            if e.index == index:
                return e.rep
        raise KeyError(index)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "representative", "peripheral"])
            for e in self.entries:
                w.writerow([e.index, e.rep, e.slot])


def enumerate_cosets(
    spec: GroupSpec,
    peripherals: Sequence[int],
    radius: int,
    budget: int | None = None,
) -> CosetTable:
    """Enumerate cosets g*P_r meeting the radius ball, round-robin over r.

    Representatives are shortlex-least; within each peripheral the cosets are
    ordered by representative, and the global index interleaves peripherals so
    index = a*k + r.
    """
    peripherals = tuple(peripherals)
    if not peripherals:
        raise ValueError("need at least one peripheral atom")
    for i in peripherals:
        if not 0 <= i < len(spec.atoms):
            raise ValueError(f"peripheral atom index {i} out of range")
    if len(set(peripherals)) != len(peripherals):
        raise ValueError("peripheral atoms must be distinct")
    ball = spec.ball(radius, budget)
    k = len(peripherals)
    per_slot: list[list[str]] = []
    for atom_idx in peripherals:
        reps = {spec.coset_rep(x, atom_idx) for x in ball}
        per_slot.append(sorted(reps, key=spec.shortlex_key))
    entries = []
    for a in range(max(len(r) for r in per_slot)):
        for slot0, reps in enumerate(per_slot):
            if a < len(reps):
                entries.append(
                    CosetEntry(
                        index=a * k + slot0 + 1,
                        rep=reps[a],
                        slot=slot0 + 1,
                        atom=peripherals[slot0],
                    )
                )
    return CosetTable(entries=tuple(entries), peripherals=peripherals, radius=radius)
