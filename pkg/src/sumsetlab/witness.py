"""Progression and subspace witnesses with exhaustive containment checks."""

from __future__ import annotations

from dataclasses import dataclass

from .groups import Coords, GroupSpec


@dataclass(frozen=True)
class ProgressionWitness:
    """A progression (or subspace/subset translate) certified inside a sumset.

    ``ambient`` is ``"int"`` for integer progressions or a group literal.
    Exactly one of the following shapes is populated:

    * arithmetic progression: ``base + j*step`` for ``j = 0..length-1``;
    * subspace translate: ``base + span(basis)``, ``length == p**len(basis)``;
    * subset translate: ``base + offset`` for each offset in ``offsets``.
    """

    ambient: str
    base: Coords
    length: int
    step: Coords | None = None
    basis: tuple[tuple[int, ...], ...] | None = None
    offsets: tuple | None = None
    verified: bool = False

    def elements(self, group: GroupSpec | None = None) -> list:
        if self.ambient == "int":
            assert isinstance(self.base, int) and isinstance(self.step, (int, type(None)))
            step = self.step or 0
            return [self.base + j * step for j in range(self.length)]
        if group is None:
            raise ValueError("group required to list elements of a group witness")
        if self.basis is not None:
            span = {group.reduce(self.base)}
            for b in self.basis:
                span = {group.add(x, tuple(c * s for c in b)) for x in span for s in range(group.modulus)}
            return sorted(span, key=group.index_of)
        if self.offsets is not None:
            return [group.add(self.base, off) for off in self.offsets]
        out, cur = [], group.reduce(self.base)
        for _ in range(self.length):
            out.append(cur)
            cur = group.add(cur, self.step if self.step is not None else 0)
        return out

    def to_json(self) -> dict:
        def enc(c):
            return list(c) if isinstance(c, tuple) else c

        payload: dict = {
            "ambient": self.ambient,
            "base": enc(self.base),
            "length": int(self.length),
            "verified": bool(self.verified),
        }
        if self.step is not None:
            payload["step"] = enc(self.step)
        if self.basis is not None:
            payload["basis"] = [list(b) for b in self.basis]
            payload["dimension"] = len(self.basis)
        if self.offsets is not None:
            payload["offsets"] = [enc(o) for o in self.offsets]
        return payload
