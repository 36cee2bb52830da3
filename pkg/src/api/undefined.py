# Sentinel design follows hikari.undefined
# Copyright (c) 2020 Nekokatt
# Copyright (c) 2021-present davfsa
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
"""Sentinel denoting a value that was never supplied.

Experiment flags default to `UNDEFINED` so that a flag the user did not pass
can be told apart from a flag passed with a falsy value. Only flags that are
not `UNDEFINED` override values read from a config file.
"""

from __future__ import annotations

__all__ = (
    "UNDEFINED",
    "UndefinedNoneOr",
    "UndefinedOr",
    "UndefinedType",
    "or_default",
)

import typing


class UndefinedType:
    """The type of the `UNDEFINED` singleton."""

    __slots__ = ()

    def __bool__(self) -> typing.Literal[False]:
        return False

    def __copy__(self) -> "UndefinedType":
        return self

    def __deepcopy__(self, memo: typing.MutableMapping[int, typing.Any]) -> "UndefinedType":
        memo[id(self)] = self
        return self

    def __reduce__(self) -> str:
        # pickle resolves the module-level name
        return "UNDEFINED"

    def __repr__(self) -> str:
        return "UNDEFINED"

    def __str__(self) -> str:
        return "UNDEFINED"


UNDEFINED = UndefinedType()


def _forbidden_new(cls: type) -> typing.NoReturn:
    raise TypeError("UNDEFINED is a singleton")


UndefinedType.__new__ = _forbidden_new  # type: ignore[method-assign]
del _forbidden_new

T_co = typing.TypeVar("T_co", covariant=True)
T = typing.TypeVar("T")

UndefinedOr = typing.Union[T_co, UndefinedType]
"""Either a value or `UNDEFINED` (the value was not mentioned at all).

Not the same as `Optional`: `None` is an explicit empty value, `UNDEFINED`
means "leave whatever default applies".
"""

UndefinedNoneOr = typing.Union[UndefinedOr[T_co], None]


def or_default(value: UndefinedOr[T], default: T) -> T:
    """Returns `default` when `value` is `UNDEFINED`, else `value`."""
    if value is UNDEFINED:
        return default
    return typing.cast(T, value)
