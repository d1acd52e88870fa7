"""Built-in presentation corpus (one ``.pres`` file per presentation)."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .dsl import parse_presentation
from .presentation import Presentation

# presentations whose relation modules are known to be permutational (aspherical)
ASPHERICAL = ("torus", "torus-plus-free")
ONE_RELATOR_PRO_P = ("torus", "onerel-x2", "onerel-x4", "onerel-x2-comm", "onerel-comm-y4", "onerel-x3")


def corpus_dir() -> Path:
    return Path(str(resources.files("relmod") / "corpus"))


def names() -> list[str]:
    return sorted(p.stem for p in corpus_dir().glob("*.pres"))


def load(name: str, **overrides) -> Presentation:
    path = corpus_dir() / f"{name}.pres"
    if not path.exists():
        raise KeyError(f"no corpus presentation named {name!r}")
    return parse_presentation(path.read_text(encoding="utf-8"), **overrides)


def load_all() -> dict[str, Presentation]:
    return {n: load(n) for n in names()}
