"""Built-in example algebras shipped as text files in ``catalog/``."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .errors import InputError
from .fileformat import AlgebraFile, from_algebra, parse_text, serialize


def names() -> list[str]:
    files = resources.files(__package__).joinpath("catalog").iterdir()
    return sorted(f.name[:-4] for f in files if f.name.endswith(".alg"))


def text(name: str) -> str:
    if name not in names():
        raise InputError(f"no catalog entry named {name!r} (known: {', '.join(names())})")
    return resources.files(__package__).joinpath("catalog", f"{name}.alg").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load(name: str) -> AlgebraFile:
    return parse_text(text(name), f"catalog:{name}")


def catalog() -> list[AlgebraFile]:
    return [load(nm) for nm in names()]


def generate_double(base: str = "kodaira") -> str:
    """Serialized quaternionic double of a catalog entry with an operator ``I``."""
    from .double import double

    af = load(base)
    I = af.operator("I")
    if I is None:
        raise InputError(f"catalog entry {base!r} has no operator I")
    g2, H = double(af.algebra(), I, name=f"{base}-double")
    out = from_algebra(g2, {"I": H.I, "J": H.J, "K": H.K}, flags=("hypercomplex",))
    return serialize(out)
