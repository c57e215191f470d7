"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 data or format error, 3 internal
invariant violation (including an empty beam).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from . import __version__
from .alphabet import Alphabet, load_emissions
from .decoder import DecoderConfig, decode_batch
from .exceptions import BatchItemError, CtcfuseError, DegenerateCounts, EmptyBeam, OrderOutOfRange
from .lm import MAX_ORDER, NGramLM, read_arpa
from .manifest import read_durations, stats_by_id
from .metrics import aggregate, evaluate_corpus, format_percent
from .segmenter import DEFAULT_MAX_LEN, read_utterance_manifest, slice_corpus, write_segment_manifest
from .textnorm import NormalizationConfig, load_replacements, normalize, render

log = logging.getLogger("ctcfuse")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3
EMISSION_SUFFIX = ".emit"


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def _read_jsonl_texts(path) -> dict:
    out = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                key, text = str(obj["id"]), obj["text"]
            except (ValueError, KeyError, TypeError) as exc:
                raise DataError(f"{path}:{lineno}: expected {{\"id\", \"text\"}}: {exc}") from exc
            if key in out:
                raise DataError(f"{path}:{lineno}: duplicate id {key!r}")
            out[key] = text
    return out


# subcommands


def cmd_normalize(args) -> int:
    try:
        replacements = load_replacements(args.replacements) if args.replacements else ()
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    config = NormalizationConfig(lowercase=not args.keep_case, replacements=replacements)
    try:
        with open(args.input, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {args.input}: {exc}") from exc
    words_in = words_out = 0
    out = []
    for line in lines:
        t = normalize(line, config)
        words_in += len(line.split())
        words_out += len(t)
        out.append(render(t))
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("".join(line + "\n" for line in out))
    print(f"lines={len(lines)} words_in={words_in} words_out={words_out} removed={words_in - words_out}", file=sys.stderr)
    return EXIT_OK


def cmd_segment(args) -> int:
    if not args.max_len > 0:
        raise UsageError("--max-len must be positive")
    try:
        utterances = read_utterance_manifest(args.manifest)
        segments, discarded = slice_corpus(utterances, args.max_len)
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    write_segment_manifest(segments, args.output)
    report = {"max_len": args.max_len, "count": len(discarded), "discarded": discarded}
    if args.discards:
        Path(args.discards).write_text(_dump(report) + "\n", encoding="utf-8")
    print(
        f"utterances={len(utterances)} segments={len(segments)} discarded={len(discarded)}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_lm_train(args) -> int:
    if args.order > MAX_ORDER and not args.allow_high_order:
        raise UsageError(f"--order {args.order} exceeds the {MAX_ORDER}-gram cap; pass --allow-high-order")
    try:
        with open(args.corpus, encoding="utf-8") as fh:
            corpus = [line.split() for line in fh]
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {args.corpus}: {exc}") from exc
    corpus = [s for s in corpus if s]
    if not corpus:
        raise DataError(f"{args.corpus}: corpus is empty")
    lm = NGramLM(
        order=args.order,
        prune_unigram=args.prune_unigram,
        prune_higher=args.prune_higher,
        unk_floor=args.unk_floor,
        allow_high_order=args.allow_high_order,
    )
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            lm.fit(corpus)
    except DegenerateCounts as exc:
        raise DataError(str(exc)) from exc
    except (OrderOutOfRange, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    for w in caught:
        log.warning("%s", w.message)
    lm.write_arpa(args.arpa_out)
    sizes = " ".join(f"{n + 1}-grams={len(t)}" for n, t in enumerate(lm.model_.entries))
    print(f"vocabulary={lm.vocabulary_size_} order={lm.model_.order} {sizes}", file=sys.stderr)
    return EXIT_OK


def _emission_files(directory) -> list[Path]:
    d = Path(directory)
    if not d.is_dir():
        raise DataError(f"{directory} is not a directory")
    return sorted(p for p in d.iterdir() if p.suffix == EMISSION_SUFFIX)


def cmd_decode(args) -> int:
    try:
        alphabet = Alphabet.from_json(args.alphabet)
    except (OSError, ValueError) as exc:
        raise DataError(f"alphabet: {exc}") from exc
    if args.greedy and (args.arpa or args.alpha != 0.5 or args.beta != 1.5):
        log.warning("--greedy ignores --arpa, --alpha and --beta")
    lm = None
    if args.arpa and not args.greedy:
        try:
            lm = read_arpa(args.arpa)
        except (OSError, ValueError) as exc:
            raise DataError(f"{args.arpa}: {exc}") from exc
    try:
        config = DecoderConfig(
            beam_width=args.beam_width,
            alpha=args.alpha,
            beta=args.beta,
            token_min_logp=args.token_min_logp,
            lm=lm,
            nbest=args.nbest,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")

    files = _emission_files(args.emissions_dir)
    matrices = []
    for path in files:
        try:
            matrices.append(load_emissions(path, alphabet))
        except (OSError, ValueError) as exc:
            raise DataError(f"{path}: {exc}") from exc
    try:
        results = decode_batch(matrices, alphabet, config, n_jobs=args.jobs, greedy=args.greedy)
    except BatchItemError as exc:
        if isinstance(exc.error, EmptyBeam):
            raise exc.error from exc
        raise DataError(f"{files[exc.index]}: {exc.error}") from exc

    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        for path, res in zip(files, results):
            record = {"id": path.stem, "text": res.text, "score": res.score}
            if not args.greedy:
                record["nbest"] = [{"text": h.text, "score": h.fused_score} for h in res.nbest]
            fh.write(_dump(record) + "\n")
    print(f"decoded={len(results)}", file=sys.stderr)
    return EXIT_OK


def cmd_eval(args) -> int:
    refs = args.ref.split(",")
    hyps = args.hyp.split(",")
    if len(refs) != len(hyps):
        raise UsageError(f"--ref lists {len(refs)} files but --hyp lists {len(hyps)}")
    datasets, totals = [], []
    for ref_path, hyp_path in zip(refs, hyps):
        ref = {k: normalize(v) for k, v in _read_jsonl_texts(ref_path).items()}
        hyp = {k: normalize(v) for k, v in _read_jsonl_texts(hyp_path).items()}
        try:
            per_id, total = evaluate_corpus(ref, hyp)
        except CtcfuseError as exc:
            raise DataError(f"{ref_path} vs {hyp_path}: {exc}") from exc
        totals.append(total)
        datasets.append(
            {
                "ref": ref_path,
                "hyp": hyp_path,
                "utterances": {k: r.as_dict() for k, r in per_id.items()},
                "aggregate": total.as_dict(),
            }
        )
        if len(refs) > 1:
            print(f"{ref_path}: WER {format_percent(total.wer)}")
    overall = aggregate(totals)
    report = {"datasets": datasets, "total": overall.as_dict()}
    if args.report:
        Path(args.report).write_text(_dump(report) + "\n", encoding="utf-8")
    print(f"WER {format_percent(overall.wer)}")
    return EXIT_OK


def cmd_stats(args) -> int:
    try:
        durations = read_durations(args.manifest)
        texts = _read_jsonl_texts(args.transcripts)
        result = stats_by_id(durations, {k: normalize(v) for k, v in texts.items()})
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    print(f"# hours\t{result.total_hours:.4f}")
    print(f"# words\t{result.word_count}")
    print(f"avg-len\t{result.avg_len:.2f}")
    if args.output:
        Path(args.output).write_text(_dump(result.as_dict()) + "\n", encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ctcfuse", description="CTC decoding, n-gram LMs and WER tooling.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("normalize", help="normalize transcripts line by line")
    p.add_argument("--input", required=True, help="UTF-8 text, one transcript per line")
    p.add_argument("--output", required=True)
    p.add_argument("--replacements", help="TSV of (regex, replacement) applied first, in order")
    p.add_argument("--keep-case", action="store_true", help="do not lowercase")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("segment", help="slice utterances at pauses")
    p.add_argument("--manifest", required=True, help='JSON Lines of {"id", "duration", "pauses"}')
    p.add_argument("--max-len", type=float, default=DEFAULT_MAX_LEN, help="maximum segment length in seconds")
    p.add_argument("--output", required=True, help="segment manifest (JSON Lines)")
    p.add_argument("--discards", help="JSON report of discarded utterance ids")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("lm-train", help="train a count-pruned Kneser-Ney ARPA model")
    p.add_argument("--corpus", required=True, help="normalized text, one sentence per line")
    p.add_argument("--order", type=int, default=MAX_ORDER)
    p.add_argument("--prune-unigram", type=int, default=10, help="drop unigrams with lower counts")
    p.add_argument("--prune-higher", type=int, default=100, help="drop n-grams (n>=2) with lower counts")
    p.add_argument("--unk-floor", type=float, default=1e-7, help="<unk> probability when nothing is pruned")
    p.add_argument("--allow-high-order", action="store_true", help=f"permit orders above {MAX_ORDER}")
    p.add_argument("--arpa-out", required=True)
    p.set_defaults(func=cmd_lm_train)

    p = sub.add_parser("decode", help="decode emission files")
    p.add_argument("--emissions-dir", required=True, help=f"directory of *{EMISSION_SUFFIX} files")
    p.add_argument("--alphabet", required=True, help="alphabet JSON")
    p.add_argument("--arpa", help="ARPA language model for shallow fusion")
    p.add_argument("--beam-width", type=int, default=100)
    p.add_argument("--alpha", type=float, default=0.5, help="LM weight")
    p.add_argument("--beta", type=float, default=1.5, help="word insertion bonus")
    p.add_argument("--token-min-logp", type=float, default=-5.0, help="per-frame token pruning floor")
    p.add_argument("--greedy", action="store_true", help="best-path decoding, no LM")
    p.add_argument("--nbest", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--output", required=True, help="JSON Lines of results")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("eval", help="word error rate")
    p.add_argument("--ref", required=True, help="comma-separated reference JSON Lines files")
    p.add_argument("--hyp", required=True, help="comma-separated hypothesis files, same order")
    p.add_argument("--report", help="write the full JSON report here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stats", help="hours, words and average length of a dataset")
    p.add_argument("--manifest", required=True, help="segment or utterance manifest")
    p.add_argument("--transcripts", required=True, help='JSON Lines of {"id", "text"}')
    p.add_argument("--output", help="also write the numbers as JSON")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ctcfuse {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"ctcfuse {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (EmptyBeam, AssertionError) as exc:
        print(f"ctcfuse {args.command}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
