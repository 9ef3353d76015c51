"""Command line interface: decode, simulate, fdist, mindist, gencode, cuts."""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from .channels import Biawgn, Bsc, llr, transmit
from .decoders import (DecoderConfig, lp_decode, make_decoder)
from .formulations import (matrix_adaptation_cut_search, rpc_cycle_cut_search)
from .gf2 import (LinearCode, load_alist, min_distance_bruteforce,
                  random_regular_ldpc, save_alist, spc_product_code)
from .sim import SimConfig, fer_confidence, simulate_to_csv
from . import decoders as _dec


def load_code(spec: str) -> LinearCode:
    """Code source: an alist path, 'random:n,dv,dc,seed', or 'spc:d1,d2,..'."""
    if spec.startswith("random:"):
        n, dv, dc, seed = (int(t) for t in spec[len("random:"):].split(","))
        return random_regular_ldpc(n, dv, dc, seed)
    if spec.startswith("spc:"):
        dims = tuple(int(t) for t in spec[len("spc:"):].split(","))
        return spc_product_code(dims)
    with open(spec) as fh:
        return load_alist(fh.read())


def parse_channel(spec: str):
    kind, _, value = spec.partition(":")
    if kind == "bsc":
        return Bsc(float(value))
    if kind == "biawgn":
        return Biawgn(float(value))
    raise ValueError("channel must look like bsc:0.05 or biawgn:0.8")


def _llr_for(args, code) -> np.ndarray:
    if args.llr is not None:
        lam = np.array([float(t) for t in args.llr.split(",")])
        if lam.shape != (code.n,):
            raise SystemExit(f"expected {code.n} LLR values, got {len(lam)}")
        return lam
    if args.channel is None:
        raise SystemExit("need either --llr or --channel")
    channel = parse_channel(args.channel)
    zero = np.zeros(code.n, dtype=np.uint8)
    y = transmit(zero, channel, args.seed)
    return llr(y, channel)


def _format_point(point) -> str:
    return ",".join(f"{v:g}" for v in np.asarray(point, dtype=float))


def cmd_decode(args) -> int:
    code = load_code(args.code)
    lam = _llr_for(args, code)
    cfg = DecoderConfig(formulation=args.formulation, seed=args.seed)
    result = make_decoder(args.decoder, cfg)(code, lam)
    s = result.stats
    point = "" if result.point is None else _format_point(result.point)
    print(f"status={result.status.value} value={result.value:.9g} "
          f"point={point} lp_solves={s.lp_solves} cuts={s.cuts_added} "
          f"iterations={s.iterations} branch_nodes={s.branch_nodes} "
          f"ms={1000 * s.wall_time:.3f}")
    return 0


def parse_sim_config_text(text: str) -> SimConfig:
    """Line-oriented key=value simulation config (see README for keys)."""
    kv: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {line!r}")
        key, _, value = line.partition("=")
        kv[key.strip()] = value.strip()
    if "code" not in kv:
        raise ValueError("config needs a code= line")
    code = load_code(kv["code"])
    dc_kwargs = {}
    for key, value in kv.items():
        if key.startswith("decoder."):
            name = key[len("decoder."):]
            fields = {f.name: f.type for f in dataclasses.fields(DecoderConfig)}
            if name not in fields:
                raise ValueError(f"unknown decoder option {name!r}")
            current = getattr(DecoderConfig(), name)
            if isinstance(current, tuple):
                dc_kwargs[name] = tuple(value.split(","))
            elif isinstance(current, bool):
                dc_kwargs[name] = value.lower() in ("1", "true", "yes")
            elif isinstance(current, int):
                dc_kwargs[name] = int(value)
            elif isinstance(current, float):
                dc_kwargs[name] = float(value)
            else:
                dc_kwargs[name] = value
    return SimConfig(
        code=code,
        channel=kv.get("channel", "bsc"),
        points=tuple(float(t) for t in kv["points"].split(",")),
        decoders=tuple(t.strip() for t in kv["decoders"].split(",")),
        decoder_config=DecoderConfig(**dc_kwargs),
        max_frames=int(kv.get("max_frames", 1_000_000)),
        min_frame_errors=int(kv.get("min_frame_errors", 100)),
        master_seed=int(kv.get("master_seed", 0)),
    )


def cmd_simulate(args) -> int:
    with open(args.config) as fh:
        config = parse_sim_config_text(fh.read())
    records = simulate_to_csv(config, args.out)
    for r in records:
        low, high = fer_confidence(r)
        print(f"{r.decoder} point={r.point:g} frames={r.frames} "
              f"fer={r.fer:.4g} ci95=[{low:.4g},{high:.4g}]")
    return 0


def cmd_fdist(args) -> int:
    code = load_code(args.code)
    value = _dec.fractional_distance(code, args.formulation)
    print(f"{value:.9g}")
    return 0


def cmd_mindist(args) -> int:
    code = load_code(args.code)
    print(min_distance_bruteforce(code))
    return 0


def cmd_gencode(args) -> int:
    code = random_regular_ldpc(args.n, args.dv, args.dc, args.seed)
    text = save_alist(code)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_cuts(args) -> int:
    code = load_code(args.code)
    lam = _llr_for(args, code)
    result = lp_decode(code, lam, "fs")
    if result.status.value != "fractional_failure":
        print(f"status={result.status.value} (no cut search: optimum not fractional)")
        return 0
    x = result.point
    cuts = matrix_adaptation_cut_search(code.H, x)
    cuts += [c for c in rpc_cycle_cut_search(code.H, x, rng_seed=args.seed)
             if c not in cuts]
    print(f"status=fractional_failure value={result.value:.9g} cuts={len(cuts)}")
    for c in cuts:
        sup = ",".join(map(str, c.support))
        odd = ",".join(map(str, c.odd_subset))
        print(f"cut support={sup} odd={odd} violation={c.violation(x):.6g}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mpdec",
        description="Mathematical-programming decoders for binary linear codes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", help="decode one frame and print the result")
    p.add_argument("--code", required=True)
    p.add_argument("--llr", help="comma separated LLR values")
    p.add_argument("--channel", help="bsc:p or biawgn:sigma (all-zero frame)")
    p.add_argument("--decoder", default="lp")
    p.add_argument("--formulation", default="fs")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="run a Monte Carlo campaign")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fdist", help="fractional distance of a code")
    p.add_argument("--code", required=True)
    p.add_argument("--formulation", default="fs", choices=["fs", "cascade"])
    p.set_defaults(func=cmd_fdist)

    p = sub.add_parser("mindist", help="brute-force minimum distance")
    p.add_argument("--code", required=True)
    p.set_defaults(func=cmd_mindist)

    p = sub.add_parser("gencode", help="write a random regular code as alist")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dv", type=int, required=True)
    p.add_argument("--dc", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gencode)

    p = sub.add_parser("cuts", help="dump violated cuts at a fractional optimum")
    p.add_argument("--code", required=True)
    p.add_argument("--llr")
    p.add_argument("--channel")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_cuts)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
