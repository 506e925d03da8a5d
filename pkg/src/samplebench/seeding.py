"""Deterministic child-seed derivation.

A child seed is the 64-bit FNV-1a hash of the ASCII string
``"<master>:<index>:<tag>"`` where ``master`` and ``index`` are rendered as
base-10 integers. Any implementation that follows this rule reproduces the
same per-batch random streams from the same master seed.
"""

from __future__ import annotations

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a64(data: bytes) -> int:
    h = FNV64_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV64_PRIME) & _MASK64
    return h


def child_seed(master: int, index: int, tag: str) -> int:
    return fnv1a64(f"{int(master)}:{int(index)}:{tag}".encode("ascii"))
