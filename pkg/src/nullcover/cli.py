"""Batch JSON command line.

Every subcommand reads inline JSON (or @file) plus flags, writes one JSON
document to stdout, and is byte-for-byte deterministic for identical
arguments.  Exit codes: 0 ok, 2 malformed input, 3 precondition violated,
4 cap exceeded, 10 internal verification failure (a bug, reported with a
reproduction payload).
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import wraps
from typing import Optional

import click

from . import cover as cov
from . import nullset as ns
from . import structure as st
from .errors import NullcoverError, SchemaError
from .groups import DEFAULT_ENUM_CAP, FiniteAbelianGroup, PadicContext

ENV_CAP_VERIFY = "NULLCOVER_CAP_VERIFY"


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    cap_enum: int = DEFAULT_ENUM_CAP
    cap_verify: int = cov.DEFAULT_VERIFY_CAP
    fmt: str = "json"
    out: Optional[str] = None


def _default_cap_verify() -> int:
    raw = os.environ.get(ENV_CAP_VERIFY)
    if raw is None:
        return cov.DEFAULT_VERIFY_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise SchemaError(f"{ENV_CAP_VERIFY} must be an integer, got {raw!r}") from None
    if cap <= 0:
        raise SchemaError(f"{ENV_CAP_VERIFY} must be positive, got {cap}")
    return cap


def common_options(fn):
    fn = click.option("--seed", type=int, default=0, show_default=True, help="Deterministic seed.")(fn)
    fn = click.option("--cap-enum", type=int, default=None, help="Enumeration cap (default 2^20).")(fn)
    fn = click.option(
        "--cap-verify", type=int, default=None, help=f"Verification cap (default 2^20; env {ENV_CAP_VERIFY})."
    )(fn)
    fn = click.option(
        "--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True
    )(fn)
    fn = click.option("--out", type=str, default=None, help="Write output here instead of stdout.")(fn)
    return fn


def _config(seed, cap_enum, cap_verify, fmt, out) -> RunConfig:
    cfg = RunConfig(
        seed=seed,
        cap_enum=DEFAULT_ENUM_CAP if cap_enum is None else cap_enum,
        cap_verify=_default_cap_verify() if cap_verify is None else cap_verify,
        fmt=fmt,
        out=out,
    )
    if cfg.cap_enum <= 0 or cfg.cap_verify <= 0:
        raise SchemaError("caps must be positive")
    return cfg


def parse_payload(raw: Optional[str]) -> object:
    """Inline JSON, or @path to read a JSON file."""
    if raw is None:
        raise SchemaError("this command needs --in")
    if raw.startswith("@"):
        try:
            with open(raw[1:], "r", encoding="utf-8") as handle:
                raw = handle.read()
        except OSError as exc:
            raise SchemaError(f"cannot read {raw[1:]!r}: {exc}") from None
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None


def _render_table(payload: object, prefix: str = "") -> list[str]:
    if isinstance(payload, dict):
        lines = []
        for key in sorted(payload):
            lines.extend(_render_table(payload[key], f"{prefix}{key}." if prefix else f"{key}."))
        return lines
    if isinstance(payload, list):
        return [f"{prefix.rstrip('.')}: {json.dumps(payload, sort_keys=True)}"]
    return [f"{prefix.rstrip('.')}: {json.dumps(payload)}"]


def emit(cfg: RunConfig, payload: dict) -> None:
    if cfg.fmt == "json":
        text = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    else:
        text = "\n".join(_render_table(payload)) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def command(fn):
    """Wrap a subcommand body: build the config, emit, map errors to codes."""

    @wraps(fn)
    def runner(seed, cap_enum, cap_verify, fmt, out, **kwargs):
        try:
            cfg = _config(seed, cap_enum, cap_verify, fmt, out)
            emit(cfg, fn(cfg, **kwargs))
        except NullcoverError as exc:
            error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
            repro = getattr(exc, "repro", None)
            if repro is not None:
                error["error"]["repro"] = repro
            sys.stdout.write(json.dumps(error, sort_keys=True, separators=(",", ":")) + "\n")
            raise SystemExit(getattr(exc, "exit_code", 3))

    return runner


def _parse_orders(raw: str) -> tuple[int, ...]:
    try:
        orders = tuple(int(tok) for tok in raw.split(",") if tok.strip() != "")
    except ValueError:
        raise SchemaError(f"--orders must be comma-separated integers, got {raw!r}") from None
    if not orders:
        raise SchemaError("--orders must name at least one cyclic order")
    return orders


def _order_supply(orders: tuple[int, ...], cycle: bool):
    if not cycle:
        return orders
    import itertools

    return itertools.cycle(orders)


def _parse_fraction(raw: str) -> Fraction:
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"expected a fraction like 1/10, got {raw!r}") from None


@click.group()
def main() -> None:
    """Exact covering constructions for compact nullsets, with certified
    translates and a symbolic reduction pipeline."""


# -- plan -------------------------------------------------------------------


@main.group("plan")
def plan_group() -> None:
    """Cut coordinates into blocks with fast-growing group orders."""


@plan_group.command("product")
@click.option("--orders", required=True, help="Comma-separated cyclic orders of the coordinates.")
@click.option("--cycle", is_flag=True, help="Repeat the orders list cyclically as needed.")
@click.option("--depth", type=int, required=True)
@common_options
@command
def plan_product(cfg: RunConfig, orders: str, cycle: bool, depth: int) -> dict:
    plan = cov.plan_blocks_product(_order_supply(_parse_orders(orders), cycle), depth)
    return plan.to_json()


@plan_group.command("padic")
@click.option("--p", type=int, required=True)
@click.option("--depth", type=int, required=True)
@common_options
@command
def plan_padic(cfg: RunConfig, p: int, depth: int) -> dict:
    return cov.plan_blocks_padic(p, depth).to_json()


# -- nullset construction ----------------------------------------------------


@main.command("build-nullset")
@click.option("--in", "payload", default=None, help="Block plan JSON (inline or @file).")
@common_options
@command
def build_nullset_cmd(cfg: RunConfig, payload: Optional[str]) -> dict:
    plan = cov.BlockPlan.from_json(parse_payload(payload))
    return cov.build_nullset(plan).to_json()


# -- covers -------------------------------------------------------------------


def _cover_inputs(cfg, payload, plan_builder, width):
    """Either a full {spec, slalom} payload or a seeded self-contained run."""
    if payload is not None:
        obj = parse_payload(payload)
        if not isinstance(obj, dict) or "spec" not in obj or "slalom" not in obj:
            raise SchemaError("cover payload must be an object with 'spec' and 'slalom'")
        return cov.NullsetSpec.from_json(obj["spec"]), cov.Slalom.from_json(obj["slalom"])
    plan = plan_builder()
    spec = cov.build_nullset(plan)
    slalom = cov.random_slalom(plan, width, cfg.seed)
    return spec, slalom


def _attach_repro(exc, spec, slalom) -> None:
    exc.repro = {"spec": spec.to_json(), "slalom": slalom.to_json()}


@main.group("cover")
def cover_group() -> None:
    """Compute and exhaustively verify one covering translate."""


@cover_group.command("product")
@click.option("--in", "payload", default=None, help="{'spec':…,'slalom':…} (inline or @file).")
@click.option("--orders", default=None, help="Self-contained mode: coordinate orders.")
@click.option("--cycle", is_flag=True)
@click.option("--depth", type=int, default=None)
@common_options
@command
def cover_product_cmd(cfg, payload, orders, cycle, depth) -> dict:
    def build():
        if orders is None or depth is None:
            raise SchemaError("self-contained mode needs --orders and --depth")
        return cov.plan_blocks_product(_order_supply(_parse_orders(orders), cycle), depth)

    spec, slalom = _cover_inputs(cfg, payload, build, "n+2")
    try:
        cert = cov.cover_product_slalom(spec, slalom, cfg.cap_enum, cfg.cap_verify)
    except NullcoverError as exc:
        _attach_repro(exc, spec, slalom)
        raise
    return {"spec": spec.to_json(), "slalom": slalom.to_json(), "certificate": cert.to_json()}


@cover_group.command("padic")
@click.option("--in", "payload", default=None, help="{'spec':…,'slalom':…} (inline or @file).")
@click.option("--p", type=int, default=None, help="Self-contained mode: the prime.")
@click.option("--depth", type=int, default=None)
@common_options
@command
def cover_padic_cmd(cfg, payload, p, depth) -> dict:
    def build():
        if p is None or depth is None:
            raise SchemaError("self-contained mode needs --p and --depth")
        return cov.plan_blocks_padic(p, depth)

    spec, slalom = _cover_inputs(cfg, payload, build, "(n+2)//2")
    ctx = PadicContext(spec.plan.p, spec.plan.boundaries[-1])
    try:
        cert = cov.cover_padic_slalom(ctx, spec, slalom, cfg.cap_enum, cfg.cap_verify)
    except NullcoverError as exc:
        _attach_repro(exc, spec, slalom)
        raise
    return {"spec": spec.to_json(), "slalom": slalom.to_json(), "certificate": cert.to_json()}


@main.command("verify")
@click.option("--in", "payload", default=None, help="{'spec':…,'slalom':…,'certificate':…}.")
@common_options
@command
def verify_cmd(cfg: RunConfig, payload: Optional[str]) -> dict:
    obj = parse_payload(payload)
    if not isinstance(obj, dict) or not {"spec", "slalom", "certificate"} <= obj.keys():
        raise SchemaError("verify payload must carry 'spec', 'slalom' and 'certificate'")
    spec = cov.NullsetSpec.from_json(obj["spec"])
    slalom = cov.Slalom.from_json(obj["slalom"])
    cert = cov.CoverCertificate.from_json(spec.plan, obj["certificate"])
    if cert.verified and cert.checked_count != slalom.element_count():
        raise SchemaError(
            f"certificate claims {cert.checked_count} checked elements, slalom has {slalom.element_count()}"
        )
    return cov.verify_cover(spec, cert.translate, slalom, cfg.cap_verify).to_json()


# -- measure ------------------------------------------------------------------


@main.command("measure")
@click.option("--in", "payload", default=None, help="Nullset spec JSON (with --blocks).")
@click.option("--blocks", type=int, default=None)
@click.option("--first-below", default=None, help="Fraction threshold, e.g. 1/10.")
@common_options
@command
def measure_cmd(cfg: RunConfig, payload, blocks, first_below) -> dict:
    if first_below is not None:
        threshold = _parse_fraction(first_below)
        n = cov.first_bound_below(threshold)
        return {
            "threshold": ns.rational_to_json(threshold),
            "first_n": n,
            "bound": ns.rational_to_json(cov.bound_product(n)),
        }
    if blocks is None:
        raise SchemaError("measure needs --blocks (with --in) or --first-below")
    spec = cov.NullsetSpec.from_json(parse_payload(payload))
    return {
        "blocks": blocks,
        "measure": ns.rational_to_json(cov.measure_upper(spec, blocks)),
        "bound": ns.rational_to_json(cov.bound_product(blocks)),
    }


# -- factorial-base nullset ----------------------------------------------------


@main.group("ek")
def ek_group() -> None:
    """The factorial-digit nullset: membership, measure, supremum."""


@ek_group.command("member")
@click.option("--num", required=True)
@click.option("--den", required=True)
@click.option("--depth", type=int, required=True)
@click.option("--digits", is_flag=True, help="Also emit the expansions, digit arrays starting at n=2.")
@common_options
@command
def ek_member_cmd(cfg: RunConfig, num: str, den: str, depth: int, digits: bool) -> dict:
    q = ns.rational_from_json({"num": num, "den": den})
    payload = {"verdict": ns.ek_membership(q, depth)}
    if digits:
        greedy, alternate = ns.factorial_expand(q, depth)
        payload["greedy"] = {"digits": list(greedy.digits), "tail": greedy.tail}
        payload["alternate"] = (
            None if alternate is None else {"digits": list(alternate.digits), "tail": alternate.tail}
        )
    return payload


@ek_group.command("measure")
@click.option("--depth", type=int, required=True)
@common_options
@command
def ek_measure_cmd(cfg: RunConfig, depth: int) -> dict:
    return {"depth": depth, "value": ns.rational_to_json(ns.ek_outer_measure(depth))}


@ek_group.command("sup")
@click.option("--depth", type=int, required=True)
@common_options
@command
def ek_sup_cmd(cfg: RunConfig, depth: int) -> dict:
    return {"depth": depth, "value": ns.rational_to_json(ns.ek_sup(depth))}


# -- symbolic layer -------------------------------------------------------------


@main.command("classify")
@click.option("--in", "payload", default=None, help="Group descriptor JSON.")
@common_options
@command
def classify_cmd(cfg: RunConfig, payload) -> dict:
    descriptor = st.descriptor_from_json(parse_payload(payload))
    return st.classify_subgroup(descriptor).to_json()


@main.command("dual")
@click.option("--in", "payload", default=None, help="Group descriptor JSON.")
@common_options
@command
def dual_cmd(cfg: RunConfig, payload) -> dict:
    descriptor = st.descriptor_from_json(parse_payload(payload))
    return st.descriptor_to_json(st.dual(descriptor))


@main.command("pipeline")
@click.option("--in", "payload", default=None, help="Group descriptor JSON.")
@common_options
@command
def pipeline_cmd(cfg: RunConfig, payload) -> dict:
    descriptor = st.descriptor_from_json(parse_payload(payload))
    return st.niceness_pipeline(descriptor).to_json()


@main.command("chain")
@click.option("--orders", required=True, help="Comma-separated cyclic orders of the finite group.")
@click.option("--p", type=int, required=True)
@click.option("--depth", type=int, required=True)
@common_options
@command
def chain_cmd(cfg: RunConfig, orders: str, p: int, depth: int) -> dict:
    group = FiniteAbelianGroup(_parse_orders(orders))
    chain = st.divisible_chain(group, p, depth, cfg.cap_enum)
    return {
        "depth": depth,
        "chain": None if chain is None else [list(g) for g in chain],
    }


# -- slalom tooling --------------------------------------------------------------


@main.command("slalom-gen")
@click.option("--in", "payload", default=None, help="Block plan JSON.")
@click.option("--width", default="n+2", show_default=True, help='Width tag or JSON table, e.g. "[1,2,2]".')
@common_options
@command
def slalom_gen_cmd(cfg: RunConfig, payload, width: str) -> dict:
    plan = cov.BlockPlan.from_json(parse_payload(payload))
    spec = width
    if width.startswith("["):
        parsed = parse_payload(width)
        if not isinstance(parsed, list):
            raise SchemaError("width table must be a JSON array")
        spec = tuple(int(w) for w in parsed)
    return cov.random_slalom(plan, spec, cfg.seed).to_json()


@main.command("cube-check")
@click.option("--in", "payload", default=None, help="{'plan':…,'family':[slaloms]}.")
@common_options
@command
def cube_check_cmd(cfg: RunConfig, payload) -> dict:
    obj = parse_payload(payload)
    if not isinstance(obj, dict) or "plan" not in obj or "family" not in obj:
        raise SchemaError("cube-check payload must carry 'plan' and 'family'")
    plan = cov.BlockPlan.from_json(obj["plan"])
    if not isinstance(obj["family"], list):
        raise SchemaError("'family' must be an array of slaloms")
    family = [cov.Slalom.from_json(s) for s in obj["family"]]
    covered, witness = cov.cube_cover_check(family, plan, cfg.cap_verify)
    return {"covered": covered, "witness": None if witness is None else list(witness)}


if __name__ == "__main__":
    main()
