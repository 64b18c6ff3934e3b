"""Text file formats: field headers, tensors, measurement sets, syndromes.

Every file starts with one field header line::

    field p=<p> k=<k> mod=<c0,c1,...,ck>

with ``mod`` omitted for prime fields.  Elements serialize as base-10
coefficients ``c0,c1,...,c(k-1)`` (a single integer over GF(p)).  Formats
are whitespace-tolerant on read and canonical on write, so identical
invocations produce byte-identical files.
"""

import math

from .errors import ShapeMismatch
from .field import FieldCtx, make_extension, make_prime_field
from .hitting import Measurement, MeasurementSet
from .tensor import DenseTensor, LowRankTensor, Rank1Tensor


def field_header(ctx: FieldCtx) -> str:
    if ctx.k == 1:
        return f"field p={ctx.p} k=1"
    mod = ",".join(str(c) for c in ctx.modulus)
    return f"field p={ctx.p} k={ctx.k} mod={mod}"


def parse_field_header(line: str) -> FieldCtx:
    parts = line.split()
    if not parts or parts[0] != "field":
        raise ShapeMismatch(f"expected field header, got {line!r}")
    kv = dict(p.split("=", 1) for p in parts[1:])
    p = int(kv["p"])
    k = int(kv["k"])
    ctx = make_prime_field(p)
    if k == 1:
        return ctx
    ext = make_extension(ctx, k)
    if "mod" in kv:
        mod = tuple(int(c) for c in kv["mod"].split(","))
        if mod != ext.modulus:
            raise ShapeMismatch(
                f"modulus {kv['mod']} is not the canonical one for GF({p}^{k})"
            )
    return ext


def _dims_str(dims) -> str:
    return "x".join(str(n) for n in dims)


def _parse_dims(s: str) -> tuple[int, ...]:
    return tuple(int(t) for t in s.split("x"))


def _tensor_body(ctx: FieldCtx, t: DenseTensor) -> list[str]:
    lines = [f"tensor dims={_dims_str(t.dims)}"]
    row_len = t.dims[-1]
    for base in range(0, len(t.entries), row_len):
        lines.append(
            " ".join(ctx.serialize(e) for e in t.entries[base : base + row_len])
        )
    return lines


def write_tensor(t: DenseTensor) -> str:
    return "\n".join([field_header(t.ctx)] + _tensor_body(t.ctx, t)) + "\n"


def _read_tensor_body(ctx: FieldCtx, header: str, tokens) -> DenseTensor:
    parts = header.split()
    if not parts or parts[0] != "tensor":
        raise ShapeMismatch(f"expected tensor block, got {header!r}")
    kv = dict(p.split("=", 1) for p in parts[1:])
    dims = _parse_dims(kv["dims"])
    total = math.prod(dims)
    entries = [ctx.parse(next(tokens)) for _ in range(total)]
    return DenseTensor(ctx, dims, entries)


def _token_stream(lines):
    for line in lines:
        yield from line.split()


def read_tensor(text: str) -> DenseTensor:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    ctx = parse_field_header(lines[0])
    return _read_tensor_body(ctx, lines[1], _token_stream(lines[2:]))


def read_tensor_or_lowrank(text: str) -> DenseTensor:
    """Read either format, expanding a factored file to its dense tensor."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) > 1 and lines[1].startswith("lowrank"):
        from .tensor import expand

        return expand(read_lowrank(text))
    return read_tensor(text)


def write_lowrank(t: LowRankTensor) -> str:
    ctx = t.ctx
    lines = [
        field_header(ctx),
        f"lowrank dims={_dims_str(t.dims)} terms={len(t.terms)}",
    ]
    for term in t.terms:
        for v in term.factors:
            lines.append(" ".join(ctx.serialize(c) for c in v))
    return "\n".join(lines) + "\n"


def read_lowrank(text: str) -> LowRankTensor:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    ctx = parse_field_header(lines[0])
    parts = lines[1].split()
    if parts[0] != "lowrank":
        raise ShapeMismatch(f"expected lowrank header, got {lines[1]!r}")
    kv = dict(p.split("=", 1) for p in parts[1:])
    dims = _parse_dims(kv["dims"])
    terms = int(kv["terms"])
    d = len(dims)
    at = 2
    factor_lists = []
    for _ in range(terms):
        factors = []
        for a in range(d):
            vec = [ctx.parse(tok) for tok in lines[at].split()]
            if len(vec) != dims[a]:
                raise ShapeMismatch("factor vector length does not match dims")
            factors.append(tuple(vec))
            at += 1
        factor_lists.append(tuple(factors))
    terms_t = tuple(Rank1Tensor(ctx, f) for f in factor_lists)
    return LowRankTensor(ctx, dims, terms_t)


def write_measurements(ms: MeasurementSet) -> str:
    ctx = ms.ctx
    lines = [
        field_header(ctx),
        f"measurements family={ms.family} count={len(ms)} dims={_dims_str(ms.dims)}",
    ]
    for m in ms.measurements:
        ls = ",".join(str(v) for v in m.ls) if m.ls else "-"
        meta = f"meta k={m.k} l={ls}"
        if m.phi:
            meta += " phi=" + ",".join(str(v) for v in m.phi)
        lines.append(meta)
        lines.extend(_tensor_body(ctx, m.to_dense(ctx, ms.dims)))
    return "\n".join(lines) + "\n"


def read_measurements(text: str) -> MeasurementSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    ctx = parse_field_header(lines[0])
    parts = lines[1].split()
    if parts[0] != "measurements":
        raise ShapeMismatch(f"expected measurements header, got {lines[1]!r}")
    kv = dict(p.split("=", 1) for p in parts[1:])
    family = kv["family"]
    count = int(kv["count"])
    dims = _parse_dims(kv["dims"])
    total = math.prod(dims)
    at = 2
    meas = []
    for _ in range(count):
        mparts = lines[at].split()
        if mparts[0] != "meta":
            raise ShapeMismatch(f"expected meta line, got {lines[at]!r}")
        mkv = dict(p.split("=", 1) for p in mparts[1:])
        k = int(mkv["k"])
        ls = () if mkv["l"] == "-" else tuple(int(v) for v in mkv["l"].split(","))
        phi = (
            tuple(int(v) for v in mkv["phi"].split(",")) if "phi" in mkv else ()
        )
        at += 1
        # tensor block: header line + ceil(total / dims[-1]) value lines
        value_lines = (total + dims[-1] - 1) // dims[-1]
        block = lines[at : at + 1 + value_lines]
        t = _read_tensor_body(ctx, block[0], _token_stream(block[1:]))
        at += 1 + value_lines
        meas.append(
            Measurement(k=k, ls=ls, phi=phi, entries=tuple(t.entries))
        )
    return MeasurementSet(ctx, dims, family, 0, tuple(meas))


def write_syndromes(
    ctx: FieldCtx, family: str, r: int, dims, syndromes
) -> str:
    lines = [
        field_header(ctx),
        f"syndromes family={family} r={r} dims={_dims_str(dims)}",
    ]
    lines.extend(ctx.serialize(s) for s in syndromes)
    return "\n".join(lines) + "\n"


def read_syndromes(text: str):
    """Returns (ctx, family, r, dims, syndromes)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    ctx = parse_field_header(lines[0])
    parts = lines[1].split()
    if parts[0] != "syndromes":
        raise ShapeMismatch(f"expected syndromes header, got {lines[1]!r}")
    kv = dict(p.split("=", 1) for p in parts[1:])
    syndromes = [ctx.parse(ln.strip()) for ln in lines[2:]]
    return ctx, kv["family"], int(kv["r"]), _parse_dims(kv["dims"]), syndromes
