"""Helpers for sparse vectors stored as ``dict[key, scalar]``."""

from __future__ import annotations

from .scalars import simplify


def add_into(vec: dict, key, c) -> None:
    """vec[key] += c, dropping the entry when it cancels."""
    if not c:
        return
    v = vec.get(key)
    if v is None:
        vec[key] = c
    else:
        v = v + c
        if v:
            vec[key] = v
        else:
            del vec[key]


def axpy(out: dict, c, vec: dict) -> dict:
    """out += c * vec, in place; returns out."""
    if not c:
        return out
    if c == 1:
        for k, v in vec.items():
            add_into(out, k, v)
    else:
        for k, v in vec.items():
            add_into(out, k, c * v)
    return out


def scale(vec: dict, c) -> dict:
    if not c:
        return {}
    if c == 1:
        return dict(vec)
    return {k: simplify(c * v) for k, v in vec.items() if c * v}


def vsum(*vecs: dict) -> dict:
    out: dict = {}
    for v in vecs:
        axpy(out, 1, v)
    return out


def vsub(a: dict, b: dict) -> dict:
    out = dict(a)
    axpy(out, -1, b)
    return out


def clean(vec: dict) -> dict:
    return {k: simplify(v) for k, v in vec.items() if v}
