from __future__ import annotations

import enum
import math


class Uav(enum.IntEnum):
    """Downlink UAV index. UAV1 is the near (SIC) user, UAV2 the far (II) user."""

    UAV1 = 1
    UAV2 = 2


def as_uav(which) -> Uav:
    if isinstance(which, str):
        key = which.strip().upper()
        if key in ("1", "2"):
            return Uav(int(key))
        try:
            return Uav[key]
        except KeyError:
            raise ValueError(f"unknown UAV {which!r}; expected UAV1 or UAV2") from None
    try:
        return Uav(int(which))
    except ValueError:
        raise ValueError(f"unknown UAV {which!r}; expected 1 or 2") from None


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (float(value_db) / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)
