"""Command line: ``emogru {train,eval,predict,baseline,gradcheck}``.

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from .checkpoint import load_checkpoint, save_checkpoint
from .config import RunConfig, bundled_config
from .data import (Vocabulary, encode_dataset, example_tokens, load_emocontext,
                   load_label_map, load_labeled_sentences, load_pretrained_embeddings, split)
from .errors import ConfigError, DataFormatError, EmoGruError, NumericalError
from .evaluation import (baseline_classify, compute_metrics, confusion, restrict_to_task,
                         write_predictions)
from .features import TASK_LABELS, load_emoticon_map, load_nrc, load_sentiwordnet
from .gradcheck import gradient_check
from .tensor import make_rng
from .training import evaluate, predict_proba, run_experiment

log = logging.getLogger("emogru")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _load_examples(cfg, key, allow_unlabeled=False, path=None):
    path = Path(path) if path is not None else cfg.path(key)
    if cfg["data_format"] == "emocontext":
        return load_emocontext(path, allow_unlabeled=allow_unlabeled)
    if cfg.path("label_map") is None:
        raise ConfigError("data_format=sentences needs a label_map")
    examples, _ = load_labeled_sentences(path, load_label_map(cfg.path("label_map")))
    return examples


def _lexicons(cfg, needed):
    if not needed:
        return None, None
    cfg.require("swn", "nrc")
    return load_sentiwordnet(cfg.path("swn")), load_nrc(cfg.path("nrc"))


def _emoticons(cfg):
    return load_emoticon_map(cfg.path("emoticons"))


def _format_report(result):
    lines = [f"{'metric':<20} {'mean':>8} {'std':>8}"]
    for k in result.mean:
        lines.append(f"{k:<20} {result.mean[k]:8.4f} {result.std[k]:8.4f}")
    return "\n".join(lines)


def cmd_train(cfg, args):
    cfg.require("train")
    model_cfg_probe = cfg.model_config(1)
    # fail on missing lexicons before touching any data
    swn, nrc = _lexicons(cfg, model_cfg_probe.use_aux_features)
    emoticons = _emoticons(cfg)

    train_ex = _load_examples(cfg, "train")
    if cfg.path("dev") is not None:
        cfg.require("dev")
        dev_ex = _load_examples(cfg, "dev")
        test_ex = _load_examples(cfg, "test") if cfg.path("test") is not None else None
    else:
        parts = split(train_ex, seed=cfg["seed"])
        train_ex, dev_ex, test_ex = parts.train, parts.dev, parts.test or None

    vocab = Vocabulary.build(train_ex, emoticons)
    max_len = cfg["max_len"]
    enc = lambda ex: encode_dataset(ex, vocab, max_len, swn, nrc, emoticons)  # noqa: E731
    train_set, dev_set = enc(train_ex), enc(dev_ex)
    test_set = enc(test_ex) if test_ex else None

    embedding = None
    if cfg.path("vectors") is not None:
        cfg.require("vectors")
        embedding, cov = load_pretrained_embeddings(cfg.path("vectors"), vocab,
                                                    cfg["emb_dim"], cfg["seed"])
        log.info("pretrained coverage %.1f%%", 100 * cov.ratio)

    out = Path(cfg["checkpoint_dir"])
    out.mkdir(parents=True, exist_ok=True)
    extra = {"vocab": vocab.itos}

    def on_run(i, res):
        run_dir = out / f"run_{i}"
        run_dir.mkdir(exist_ok=True)
        save_checkpoint(run_dir / "model.ckpt", res.params, extra)
        res.history.write_jsonl(run_dir / "history.jsonl")
        (run_dir / "metrics.json").write_text(json.dumps(res.metrics, sort_keys=True) + "\n")
        log.info("run %d: %d epochs (%s), micro-f1 %.4f", i, res.history.epochs,
                 res.history.stop_reason, res.metrics["micro_f1"])

    result = run_experiment(cfg.train_config(), cfg.model_config(len(vocab)), train_set,
                            dev_set, test_set, embedding=embedding, on_run=on_run)
    (out / "report.json").write_text(json.dumps(result.summary(), sort_keys=True, indent=1) + "\n")
    report = _format_report(result)
    (out / "report.txt").write_text(report + "\n")
    print(report)
    return EXIT_OK


def _load_model(checkpoint):
    params, extra = load_checkpoint(checkpoint)
    if "vocab" not in extra:
        raise DataFormatError("checkpoint has no vocabulary", checkpoint)
    vocab = Vocabulary.from_list(extra["vocab"])
    if len(vocab) != params.config.vocab_size:
        raise DataFormatError("vocabulary size does not match the embedding table", checkpoint)
    if params.config.classes != len(TASK_LABELS):
        raise DataFormatError(f"checkpoint predicts {params.config.classes} classes, "
                              f"expected {len(TASK_LABELS)}", checkpoint)
    return params, vocab


def _encode_for(cfg, params, vocab, examples):
    swn, nrc = _lexicons(cfg, params.config.use_aux_features)
    return encode_dataset(examples, vocab, params.config.max_len, swn, nrc, _emoticons(cfg))


def cmd_eval(cfg, args):
    params, vocab = _load_model(args.checkpoint)
    examples = _load_examples(cfg, "test", path=args.data)
    data = _encode_for(cfg, params, vocab, examples)
    _, _, metrics = evaluate(params, data)
    print(metrics.table())
    print(metrics.to_json())
    if args.report:
        Path(args.report).write_text(metrics.to_json() + "\n")
    return EXIT_OK


def cmd_predict(cfg, args):
    params, vocab = _load_model(args.checkpoint)
    examples = _load_examples(cfg, "test", allow_unlabeled=True, path=args.data)
    data = _encode_for(cfg, params, vocab, examples)
    pred = predict_proba(params, data).argmax(axis=1)
    write_predictions(args.out, data.ids, [TASK_LABELS[i] for i in pred])
    print(f"wrote {len(pred)} predictions to {args.out}")
    return EXIT_OK


def cmd_baseline(cfg, args):
    cfg.require("nrc")
    nrc3 = restrict_to_task(load_nrc(cfg.path("nrc")))
    examples = _load_examples(cfg, "test", path=args.data)
    emoticons = _emoticons(cfg)
    rng = make_rng(cfg["seed"], "baseline")
    preds = [baseline_classify(example_tokens(ex, emoticons), nrc3, rng) for ex in examples]
    metrics = compute_metrics(confusion(preds, [ex.gold for ex in examples]))
    print(metrics.table())
    print(metrics.to_json())
    if args.report:
        Path(args.report).write_text(metrics.to_json() + "\n")
    return EXIT_OK


def cmd_gradcheck(cfg, args):
    worst, per_param = gradient_check(cfg["seed"])
    for name, err in per_param.items():
        print(f"{name:<12} {err:.3e}")
    tol = cfg["gradcheck_tolerance"]
    print(f"max relative error {worst:.3e} (tolerance {tol:.0e})")
    if not worst < tol:
        raise NumericalError(f"gradient check failed: {worst:.3e} >= {tol:.0e}")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="emogru", description="GRU-attention emotion classifier toolkit")
    parser.add_argument("--config", help="key = value config file (default: bundled synthetic corpus)")
    parser.add_argument("--seed", type=int, help="overrides the config seed")
    parser.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("train", help="run the multi-run training protocol")
    p = sub.add_parser("eval", help="score a checkpoint on labeled data")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", help="defaults to the config's test file")
    p.add_argument("--report", help="also write the metrics JSON here")
    p = sub.add_parser("predict", help="write id<TAB>label predictions")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data")
    p.add_argument("--out", required=True)
    p = sub.add_parser("baseline", help="lexicon majority-vote baseline")
    p.add_argument("--data")
    p.add_argument("--report")
    sub.add_parser("gradcheck", help="finite-difference check of all gradients")
    return parser


COMMANDS = {"train": cmd_train, "eval": cmd_eval, "predict": cmd_predict,
            "baseline": cmd_baseline, "gradcheck": cmd_gradcheck}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig.load(args.config or bundled_config(), args.override, args.seed)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (EmoGruError, OSError) as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
