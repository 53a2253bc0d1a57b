"""Scene description and the line-oriented scene file format."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..threat.classify import LABELS

PERSON_UNARMED = "PERSON_UNARMED"
PERSON_ARMED = "PERSON_ARMED"

WEAPON_CLASSES = LABELS[1:]  # everything but no_weapon


class SceneFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Entity:
    entity_id: int
    kind: str  # PERSON_UNARMED | PERSON_ARMED
    weapon: str | None  # weapon class for armed entities
    x: float
    y: float
    facing: int  # +1 or -1

    def __post_init__(self) -> None:
        if self.kind not in (PERSON_UNARMED, PERSON_ARMED):
            raise ValueError(f"unknown entity kind {self.kind!r}")
        if self.kind == PERSON_ARMED and self.weapon not in WEAPON_CLASSES:
            raise ValueError(f"armed entity needs a weapon class, got {self.weapon!r}")
        if self.kind == PERSON_UNARMED and self.weapon is not None:
            raise ValueError("unarmed entity must not carry a weapon class")
        if self.facing not in (-1, 1):
            raise ValueError(f"facing must be +1 or -1, got {self.facing}")


@dataclass(frozen=True)
class Scene:
    bounds: tuple[float, float] = (60.0, 40.0)
    seed: int = 0
    entities: tuple[Entity, ...] = ()

    def __post_init__(self) -> None:
        w, h = self.bounds
        for e in self.entities:
            if not (0.0 <= e.x <= w and 0.0 <= e.y <= h):
                raise ValueError(f"entity {e.entity_id} at ({e.x}, {e.y}) outside bounds")


def parse_scene(text: str) -> Scene:
    """Parse the scene schema:

        scene v1
        bounds <w> <h>
        seed <n>
        entity PERSON_ARMED <weapon> <x> <y> <facing>
        entity PERSON_UNARMED none <x> <y> <facing>
    """
    lines = [
        (i + 1, ln.strip())
        for i, ln in enumerate(text.splitlines())
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines or lines[0][1].split() != ["scene", "v1"]:
        lineno = lines[0][0] if lines else 1
        raise SceneFormatError(f"line {lineno}: expected 'scene v1' header")
    bounds = (60.0, 40.0)
    seed = 0
    entities: list[Entity] = []
    for lineno, line in lines[1:]:
        parts = line.split()
        try:
            if parts[0] == "bounds" and len(parts) == 3:
                bounds = (float(parts[1]), float(parts[2]))
            elif parts[0] == "seed" and len(parts) == 2:
                seed = int(parts[1])
            elif parts[0] == "entity" and len(parts) == 6:
                kind = parts[1]
                weapon = None if parts[2] in ("none", "-") else parts[2]
                entities.append(
                    Entity(
                        len(entities),
                        kind,
                        weapon,
                        float(parts[3]),
                        float(parts[4]),
                        int(parts[5]),
                    )
                )
            else:
                raise SceneFormatError(f"line {lineno}: unrecognized record {line!r}")
        except SceneFormatError:
            raise
        except ValueError as e:
            raise SceneFormatError(f"line {lineno}: {e}") from None
    try:
        return Scene(bounds, seed, tuple(entities))
    except ValueError as e:
        raise SceneFormatError(str(e)) from None


def load_scene(path: str) -> Scene:
    with open(path, "r", encoding="ascii") as f:
        return parse_scene(f.read())


def format_scene(scene: Scene) -> str:
    out = ["scene v1", f"bounds {scene.bounds[0]:g} {scene.bounds[1]:g}", f"seed {scene.seed}"]
    for e in scene.entities:
        weapon = e.weapon if e.weapon else "none"
        out.append(f"entity {e.kind} {weapon} {e.x:g} {e.y:g} {e.facing}")
    return "\n".join(out) + "\n"


def save_scene(scene: Scene, path: str) -> None:
    with open(path, "w", encoding="ascii") as f:
        f.write(format_scene(scene))
