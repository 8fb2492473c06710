"""Command line entry point.

Verbs: preprocess, segment, encode, synth, augment, train, eval, serve,
gradcheck.  Ink moves through files in the text or json format; stroke
and sequence data as json documents.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np


def _read_traces(path, fmt):
    from .ink import parse_ink

    return parse_ink(Path(path).read_bytes(), fmt)


def _write_traces(traces, path, fmt):
    from .ink import serialize_ink

    Path(path).write_bytes(serialize_ink(traces, fmt))


def _pp_config(args):
    from .preprocess import PreprocessConfig

    return PreprocessConfig(
        resample_hz=args.resample_hz,
        filter_order=args.order,
        filter_ripple_db=args.ripple_db,
        filter_cutoff_hz=args.cutoff_hz,
    )


def cmd_preprocess(args):
    from .preprocess import preprocess

    cfg = _pp_config(args)
    traces = [preprocess(t, cfg) for t in _read_traces(args.infile, args.format)]
    _write_traces(traces, args.out, args.format)
    print(f"preprocessed {len(traces)} traces -> {args.out}")


def cmd_segment(args):
    from .preprocess import preprocess
    from .segmentation import segment

    cfg = _pp_config(args)
    docs = []
    for trace in _read_traces(args.infile, args.format):
        strokes = segment(preprocess(trace, cfg))
        docs.append(
            {
                "label": trace.label,
                "strokes": [
                    {
                        **s.parameters(),
                        "chord_angle": s.chord_angle,
                        "degenerate": s.degenerate,
                        "m1": {"x": s.points.m1.x, "y": s.points.m1.y, "t": s.points.m1.t},
                        "m2": {"x": s.points.m2.x, "y": s.points.m2.y, "t": s.points.m2.t},
                        "m3": {"x": s.points.m3.x, "y": s.points.m3.y, "t": s.points.m3.t},
                        "h": {"x": s.points.h.x, "y": s.points.h.y, "t": s.points.h.t},
                    }
                    for s in strokes
                ],
            }
        )
    Path(args.out).write_text(json.dumps(docs))
    print(f"segmented {len(docs)} traces -> {args.out}")


def cmd_encode(args):
    from .fitting import EllipticArc
    from .beta import BetaProfile
    from .perceptual import encode_sequence
    from .segmentation import BetaPoint, BetaPoints, ElliptiStroke

    docs = json.loads(Path(args.infile).read_text())
    out = []
    for doc in docs:
        strokes = []
        for rec in doc["strokes"]:
            bp = BetaPoints(
                *(BetaPoint(0, rec[k]["x"], rec[k]["y"], rec[k]["t"]) for k in ("m1", "m2", "m3", "h"))
            )
            strokes.append(
                ElliptiStroke(
                    beta=BetaProfile(rec["t0"], rec["t1"], rec["p"], rec["q"], rec["amplitude"]),
                    arc=EllipticArc(rec["x0"], rec["y0"], max(rec["a"], 1e-9), max(rec["b"], 1e-9), rec["theta"]),
                    points=bp,
                    chord_angle=rec["chord_angle"],
                    degenerate=rec["degenerate"],
                )
            )
        if not strokes:
            out.append({"label": doc.get("label"), "items": []})
            continue
        seq = encode_sequence(strokes, with_beta=args.with_beta)
        out.append(
            {
                "label": doc.get("label"),
                "items": [
                    {
                        "mu": list(item.membership.mu),
                        "angle": item.chord_angle,
                        **({"beta": list(item.beta_features)} if item.beta_features else {}),
                    }
                    for item in seq.items
                ],
            }
        )
    Path(args.out).write_text(json.dumps(out))
    print(f"encoded {len(out)} sequences -> {args.out}")


def cmd_synth(args):
    from .corpus import default_digit_specs, default_letter_specs, synth_corpus

    specs = default_digit_specs() if args.set == "digits" else default_letter_specs()
    corpus = synth_corpus(specs, args.per_class, seed=args.seed)
    _write_traces(corpus, args.out, args.format)
    print(f"synthesized {len(corpus)} traces ({args.set}) -> {args.out}")


def cmd_augment(args):
    from .augment import AugmentConfig, expand_corpus

    cfg = AugmentConfig(
        rotate_deg_max=args.rotate,
        scale_range=tuple(float(v) for v in args.scale.split(",")),
        jiggle_sigma=args.jiggle,
        seed=args.seed,
    )
    corpus = _read_traces(args.infile, args.format)
    out = expand_corpus(corpus, cfg, args.multiplier)
    _write_traces(out, args.out, args.format)
    print(f"expanded {len(corpus)} -> {len(out)} traces -> {args.out}")


def cmd_train(args):
    from .experiment import run_experiment
    from .seqnet import TrainConfig
    from .seqnet.model_io import save_model

    corpus = _read_traces(args.infile, args.format)
    cfg = TrainConfig(
        mode=args.mode,
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.learning_rate,
        fuzzy_alpha=args.fuzzy_alpha,
        fuzzy_tau=args.fuzzy_tau,
        seed=args.seed,
    )
    report, bundle = run_experiment(
        args.pipeline,
        cfg,
        corpus,
        split=args.split,
        seed=args.seed,
        hidden_sizes=tuple(int(h) for h in args.hidden.split(",")),
        dropout_p=args.dropout,
        use_ctc=args.ctc,
        augment_multiplier=args.augment,
        return_bundle=True,
    )
    save_model(bundle, args.model)
    if args.report:
        Path(args.report).write_bytes(report.to_json())
    print(f"trained {args.pipeline} model -> {args.model}")
    print(f"held-out recognition rate: {report.recognition_rate:.4f}")


def cmd_eval(args):
    from .experiment import evaluate_bundle
    from .seqnet.model_io import load_model

    bundle = load_model(args.model)
    corpus = _read_traces(args.infile, args.format)
    report = evaluate_bundle(bundle, corpus)
    Path(args.out).write_bytes(report.to_json())
    print(f"recognition rate {report.recognition_rate:.4f} over {len(corpus)} traces -> {args.out}")


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    app = create_app(model_path=args.model)
    uvicorn.run(app, host=args.host, port=args.port)


def cmd_gradcheck(args):
    from .seqnet import NetConfig, SeqNet, grad_check

    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for seed in range(args.repeats):
        net = SeqNet(
            NetConfig(
                input_dim=4, num_classes=3, hidden_sizes=(args.hidden,),
                dropout_p=0.0, seed=seed, use_ctc=args.ctc,
            )
        )
        x = rng.normal(size=(args.steps, 4))
        target = [int(v) for v in rng.integers(0, 3, size=2)] if args.ctc else int(rng.integers(0, 3))
        worst = max(worst, grad_check(net, x, target))
    print(f"worst relative gradient error over {args.repeats} nets: {worst:.3e}")
    if worst >= 1e-4:
        print("FAIL: above the 1e-4 bar", file=sys.stderr)
        return 1
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="betaink", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_io(p, needs_out=True):
        p.add_argument("--in", dest="infile", required=True)
        if needs_out:
            p.add_argument("--out", required=True)
        p.add_argument("--format", choices=("text", "json"), default="json")

    def add_pp(p):
        p.add_argument("--resample-hz", type=float, default=100.0)
        p.add_argument("--cutoff-hz", type=float, default=10.0)
        p.add_argument("--order", type=int, default=3)
        p.add_argument("--ripple-db", type=float, default=0.5)

    p = sub.add_parser("preprocess", help="clean and resample ink")
    add_io(p)
    add_pp(p)
    p.set_defaults(fn=cmd_preprocess)

    p = sub.add_parser("segment", help="Beta-elliptic stroke segmentation")
    add_io(p)
    add_pp(p)
    p.set_defaults(fn=cmd_segment)

    p = sub.add_parser("encode", help="fuzzy EPC encoding of segmented strokes")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--with-beta", action="store_true")
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("synth", help="generate the synthetic corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("text", "json"), default="json")
    p.add_argument("--set", choices=("digits", "letters"), default="digits")
    p.add_argument("--per-class", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("augment", help="expand a corpus with label-preserving distortions")
    add_io(p)
    p.add_argument("--multiplier", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rotate", type=float, default=10.0)
    p.add_argument("--scale", default="0.8,1.2")
    p.add_argument("--jiggle", type=float, default=0.01)
    p.set_defaults(fn=cmd_augment)

    p = sub.add_parser("train", help="train a recognizer on labeled ink")
    add_io(p, needs_out=False)
    p.add_argument("--model", required=True)
    p.add_argument("--report")
    p.add_argument("--pipeline", choices=("raw", "theta_epc", "perceptual", "perceptual_beta"), default="perceptual_beta")
    p.add_argument("--mode", choices=("framewise", "fuzzy"), default="framewise")
    p.add_argument("--split", type=float, default=0.8)
    p.add_argument("--epochs", type=int, default=25)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--hidden", default="64")
    p.add_argument("--dropout", type=float, default=0.2)
    p.add_argument("--fuzzy-alpha", type=float, default=0.5)
    p.add_argument("--fuzzy-tau", type=float, default=1.0)
    p.add_argument("--ctc", action="store_true")
    p.add_argument("--augment", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("eval", help="score a saved model on labeled ink")
    add_io(p)
    p.add_argument("--model", required=True)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("serve", help="run the recognition service")
    p.add_argument("--model", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8077)
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("gradcheck", help="verify analytic gradients against finite differences")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--hidden", type=int, default=6)
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--ctc", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_gradcheck)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args) or 0


if __name__ == "__main__":
    sys.exit(main())
