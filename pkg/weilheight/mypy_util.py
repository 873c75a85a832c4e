"""
Typing helpers for the frozen record classes and the memoized field computations
"""
import dataclasses
from typing import TYPE_CHECKING, Any, Callable, NoReturn, Type, TypeVar

_T = TypeVar("_T")
_F = TypeVar("_F", bound=Callable[..., Any])


def assert_never(x: NoReturn) -> NoReturn:
    """
    Marks the fall-through branch of an isinstance chain over a Union, so that mypy
    reports place kinds or rational places that are not handled
    """
    raise AssertionError(f"unhandled {type(x).__name__}")


if TYPE_CHECKING:
    # functools.cache erases the signature of what it wraps
    # see https://github.com/python/mypy/issues/5107#issuecomment-529372406
    def cache(f: _F) -> _F:
        return f


else:
    import functools

    cache = functools.cache


def add_slots(cls: Type[_T]) -> Type[_T]:
    """
    Rebuild a dataclass with __slots__ for its fields. Records such as places,
    polynomials and field elements are created in bulk, so they drop __dict__.

    Raises:
        TypeError: cls already declares __slots__
    """
    if "__slots__" in cls.__dict__:
        raise TypeError(f"{cls.__name__} already specifies __slots__")
    field_names = tuple(f.name for f in dataclasses.fields(cls))
    # class-level defaults would clash with the slot descriptors
    namespace = {
        key: value
        for key, value in cls.__dict__.items()
        if key not in field_names and key != "__dict__"
    }
    namespace["__slots__"] = field_names
    slotted = type(cls)(cls.__name__, cls.__bases__, namespace)  # type: ignore
    slotted.__qualname__ = cls.__qualname__
    return slotted
