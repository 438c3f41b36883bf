"""Size caps guarding the exhaustive enumerations.

Every cap is configurable: pass a :class:`Caps` instance (or use
``DEFAULT_CAPS.replace(...)``) to the functions that accept ``caps=``.
"""

from dataclasses import dataclass, fields, replace

from .errors import CapExceededError, ParseError


@dataclass(frozen=True)
class Caps:
    field_size: int = 2**16
    enumeration: int = 2**24
    exhaustion: int = 2**24
    isomorphism_q: int = 64
    strong_isotopism_q: int = 7
    isotopism_q: int = 3
    buchberger_steps: int = 200_000

    def replace(self, **changes):
        return replace(self, **changes)

    def check(self, name, value, alternatives=()):
        limit = getattr(self, name)
        if value > limit:
            raise CapExceededError(name, value, limit, alternatives)

    @classmethod
    def names(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def from_overrides(cls, items, base=None):
        """Build caps from ``name=value`` strings (CLI ``--cap``)."""
        caps = base or DEFAULT_CAPS
        changes = {}
        for item in items or ():
            name, sep, value = item.partition("=")
            name = name.strip().replace("-", "_")
            if not sep or name not in cls.names():
                raise ParseError(f"bad cap override {item!r}; known caps: {', '.join(cls.names())}")
            try:
                changes[name] = int(value)
            except ValueError:
                raise ParseError(f"cap value must be an integer: {item!r}") from None
        return caps.replace(**changes) if changes else caps


DEFAULT_CAPS = Caps()
