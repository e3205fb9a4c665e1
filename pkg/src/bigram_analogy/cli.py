"""Command-line front end: reproducible experiment runs and report tables.

Subcommands: ingest, run, grid, baselines, augment, compare. A run is fully
determined by a JSON manifest (paths, model configuration, training policy,
seed); every report embeds the manifest so reruns are byte-identical.

Exit codes: 0 success, 1 data error, 2 usage/IO error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys

from . import augmentation, corpus, evaluation, model, similarity
from .corpus import DatasetError, TrainingPolicy
from .model import AnalogyConfig, NOUN_ONLY, NOUN_PLUS_ADJECTIVE
from .similarity import SimilarityError

TABLE_COLUMNS = ("novel_js", "zero_freq_js", "privative_js", "total_js")


class UsageError(Exception):
    pass


def _load_manifest(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as f:
            manifest = json.load(f)
    except OSError as e:
        raise UsageError(f"cannot read manifest: {e}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"manifest is not valid JSON: {e}") from None
    if "dataset" not in manifest:
        raise UsageError("manifest is missing 'dataset'")
    return manifest


def _policy_from_manifest(manifest: dict) -> TrainingPolicy:
    policy = manifest.get("policy", {"kind": "top_quartile"})
    return TrainingPolicy(policy["kind"], policy.get("x"))


def _build_backends(manifest: dict):
    noun_kind = manifest.get("noun_backend", "embedding")
    table = None
    if "embeddings" in manifest:
        table = similarity.load_embeddings(manifest["embeddings"])
    if noun_kind == "embedding":
        if table is None:
            raise UsageError("noun_backend=embedding requires 'embeddings'")
        noun_backend = similarity.EmbeddingBackend(table)
    elif noun_kind == "taxonomy":
        if "taxonomy_tsv" in manifest:
            taxonomy = similarity.load_taxonomy_tsv(manifest["taxonomy_tsv"])
        elif "wordnet_data" in manifest and "wordnet_index" in manifest:
            taxonomy = similarity.load_wordnet_taxonomy(
                manifest["wordnet_data"], manifest["wordnet_index"])
        else:
            raise UsageError("noun_backend=taxonomy requires 'taxonomy_tsv' or "
                             "'wordnet_data'+'wordnet_index'")
        noun_backend = similarity.TaxonomyBackend(taxonomy)
    else:
        raise UsageError(f"unknown noun_backend: {noun_kind!r}")

    adj_kind = manifest.get("adjective_backend")
    if adj_kind is None:
        adjective_backend = None
    elif adj_kind == "embedding":
        if table is None:
            raise UsageError("adjective_backend=embedding requires 'embeddings'")
        adjective_backend = similarity.EmbeddingBackend(table)
    elif adj_kind == "manual":
        table = (similarity.load_manual_table(manifest["manual_adjectives"])
                 if "manual_adjectives" in manifest
                 else similarity.builtin_manual_table())
        adjective_backend = similarity.ManualAdjectiveBackend(table)
    elif adj_kind == "taxonomy":
        raise UsageError("the taxonomy backend provides no adjective similarity; "
                         "use noun_only mode")
    else:
        raise UsageError(f"unknown adjective_backend: {adj_kind!r}")
    return noun_backend, adjective_backend


def _config_from_manifest(manifest: dict, store) -> AnalogyConfig:
    noun_backend, adjective_backend = _build_backends(manifest)
    mode = manifest.get("mode", NOUN_ONLY)
    config = AnalogyConfig(
        noun_backend=noun_backend,
        mode=mode,
        k=1,  # placeholder until k is resolved below
        mem=bool(manifest.get("mem", True)),
        noun_pool=int(manifest.get("noun_pool", 100)),
        extra_adjectives=int(manifest.get("extra_adjectives", 1)),
        adjective_backend=adjective_backend if mode == NOUN_PLUS_ADJECTIVE else None,
    )
    k = manifest.get("k", "tune")
    if k == "tune":
        grid = manifest.get("grid", [1, 2, 3, 4, 5])
        best_k, _ = model.tune_k(store, config, grid)
        return model.with_k(config, best_k)
    return model.with_k(config, int(k))


def _lexicon_from_manifest(manifest: dict) -> augmentation.PosLexicon:
    if "wordnet_index_adj" in manifest and "wordnet_index_noun" in manifest:
        return augmentation.PosLexicon.from_wordnet_index_files(
            manifest["wordnet_index_adj"], manifest["wordnet_index_noun"])
    if "adjective_list" in manifest and "noun_list" in manifest:
        def read_words(path):
            with open(path, encoding="utf-8") as f:
                return frozenset(w.strip().lower() for w in f if w.strip())
        return augmentation.PosLexicon(read_words(manifest["adjective_list"]),
                                       read_words(manifest["noun_list"]))
    raise UsageError("manifest needs 'wordnet_index_adj'+'wordnet_index_noun' "
                     "or 'adjective_list'+'noun_list' for the POS lexicon")


def _json_dump(obj, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write("\n")


def _report_to_dict(report: evaluation.EvalReport) -> dict:
    return {
        "config_fingerprint": report.config_fingerprint,
        "aggregates": report.aggregates,
        "per_bigram": {
            str(b): {"js": s.js, "ks_stat": s.ks_stat, "ks_p_raw": s.ks_p_raw,
                     "ks_significant": s.ks_significant, "within_1sd": s.within_1sd,
                     "provenance": s.provenance}
            for b, s in sorted(report.per_bigram.items())
        },
    }


def _write_predictions_csv(predictions, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["adjective", "noun", "provenance",
                         "p1", "p2", "p3", "p4", "p5", "support"])
        for p in predictions:
            probs = ["" if p.is_null() else f"{q:.10g}"
                     for q in (p.distribution.probs if p.distribution else [0] * 5)]
            support = "|".join(f"{b.adjective} {b.noun}:{s:.6g}" for b, s in p.support)
            writer.writerow([p.bigram.adjective, p.bigram.noun, p.provenance,
                             *probs, support])


# ---------------------------------------------------------------------------
# Subcommands

def cmd_ingest(args) -> int:
    records = corpus.load_dataset(args.dataset)
    print(json.dumps(corpus.summarize(records), indent=2, sort_keys=True))
    return 0


def cmd_run(args) -> int:
    manifest = _load_manifest(args.manifest)
    out_dir = manifest.get("out_dir", args.out_dir or ".")
    os.makedirs(out_dir, exist_ok=True)
    written: list[str] = []
    try:
        records = corpus.load_dataset(manifest["dataset"])
        policy = _policy_from_manifest(manifest)
        store = corpus.build_training_set(records, policy)
        if "elicitations" in manifest:
            lexicon = _lexicon_from_manifest(manifest)
            analogies = augmentation.load_elicitations(manifest["elicitations"])
            store = augmentation.merge_into_memory(store, analogies, lexicon)
        config = _config_from_manifest(manifest, store)
        targets = [r.bigram for r in records]
        subsets = evaluation.default_subsets(frozenset(store.entries))
        alpha = float(manifest.get("alpha", 0.05))

        # Table rows report no-mem scores in the main columns and the
        # memorizing run's total in the final column.
        preds_no_mem = model.predict_all(store, targets,
                                         dataclasses.replace(config, mem=False))
        preds_mem = model.predict_all(store, targets,
                                      dataclasses.replace(config, mem=True))
        report_no_mem = evaluation.evaluate(preds_no_mem, records, subsets, alpha,
                                            config.fingerprint() + " mem=False")
        report_mem = evaluation.evaluate(preds_mem, records, subsets, alpha,
                                         config.fingerprint() + " mem=True")

        manifest_out = dict(manifest)
        manifest_out["resolved_k"] = config.k
        path = os.path.join(out_dir, "manifest.json")
        _json_dump(manifest_out, path)
        written.append(path)

        predictions = preds_mem if config.mem else preds_no_mem
        path = os.path.join(out_dir, "predictions.csv")
        _write_predictions_csv(predictions, path)
        written.append(path)

        path = os.path.join(out_dir, "report.json")
        _json_dump({"manifest": manifest_out,
                    "no_mem": _report_to_dict(report_no_mem),
                    "mem": _report_to_dict(report_mem)}, path)
        written.append(path)

        path = os.path.join(out_dir, "report.tsv")
        with open(path, "w", encoding="utf-8") as f:
            f.write("model\tnovel\tzero_freq\tprivative\ttotal\ttotal_mem\n")
            cells = [f"{report_no_mem.aggregates[c]:.4f}" for c in TABLE_COLUMNS]
            cells.append(f"{report_mem.aggregates['total_js']:.4f}")
            f.write("\t".join([config.fingerprint()] + cells) + "\n")
        written.append(path)
    except Exception:
        for path in written:
            try:
                os.remove(path)
            except OSError:
                pass
        raise
    print(json.dumps({"out_dir": out_dir, "k": config.k,
                      "total_js": report_no_mem.aggregates["total_js"],
                      "total_js_mem": report_mem.aggregates["total_js"]},
                     indent=2, sort_keys=True))
    return 0


def cmd_grid(args) -> int:
    manifest = _load_manifest(args.manifest)
    if args.grid is None:
        grid = [1, 2, 3, 4, 5]
    else:
        try:
            grid = [int(k) for k in args.grid.split(",") if k.strip()]
        except ValueError:
            raise UsageError(f"bad grid: {args.grid!r}") from None
    if not grid:
        raise UsageError("empty grid")
    records = corpus.load_dataset(manifest["dataset"])
    store = corpus.build_training_set(records, _policy_from_manifest(manifest))
    noun_backend, adjective_backend = _build_backends(manifest)
    mode = manifest.get("mode", NOUN_ONLY)
    config = AnalogyConfig(
        noun_backend=noun_backend, mode=mode, k=1, mem=False,
        noun_pool=int(manifest.get("noun_pool", 100)),
        extra_adjectives=int(manifest.get("extra_adjectives", 1)),
        adjective_backend=adjective_backend if mode == NOUN_PLUS_ADJECTIVE else None)
    best_k, scores = model.tune_k(store, config, grid)
    print(json.dumps({"best_k": best_k,
                      "scores": {str(k): v for k, v in sorted(scores.items())}},
                     indent=2, sort_keys=True))
    return 0


def cmd_baselines(args) -> int:
    manifest = _load_manifest(args.manifest)
    records = corpus.load_dataset(manifest["dataset"])
    store = corpus.build_training_set(records, _policy_from_manifest(manifest))
    subsets = evaluation.default_subsets(frozenset(store.entries))
    seed = int(manifest.get("seed", 0))
    out = {}
    for name, predictor in [("uniform", evaluation.baseline_uniform()),
                            ("majority", evaluation.baseline_majority()),
                            ("random", evaluation.baseline_random(seed))]:
        report = evaluation.evaluate(evaluation.run_baseline(predictor, records),
                                     records, subsets, config_fingerprint=name)
        out[name] = report.aggregates
    out["human_resample_reference"] = evaluation.human_resample_reference(
        records, repetitions=int(manifest.get("resample_repetitions", 1000)),
        seed=seed)
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def cmd_augment(args) -> int:
    manifest = _load_manifest(args.manifest)
    lexicon = _lexicon_from_manifest(manifest)
    analogies = augmentation.load_elicitations(manifest["elicitations"])
    summary = augmentation.acceptance_summary(analogies, lexicon)
    records = corpus.load_dataset(manifest["dataset"])
    store = corpus.build_training_set(records, _policy_from_manifest(manifest))
    merged = augmentation.merge_into_memory(store, analogies, lexicon)
    new_entries = {b: d for b, d in merged.entries.items() if b not in store}
    summary["store_before"] = len(store)
    summary["store_after"] = len(merged)
    summary["new_bigrams_with_multiple_ratings"] = sum(
        1 for d in new_entries.values() if d.sample_size > 1)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def cmd_compare(args) -> int:
    with open(args.report, encoding="utf-8") as f:
        report = json.load(f)
    side = "mem" if args.mem else "no_mem"
    model_js = {b: s["js"] for b, s in report[side]["per_bigram"].items()}
    llm_js = {}
    with open(args.llm_scores, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        required = {"adjective", "noun", "js"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise DatasetError(f"LLM score file must have columns {sorted(required)}")
        for row in reader:
            llm_js[f"{row['adjective'].strip().lower()} "
                   f"{row['noun'].strip().lower()}"] = float(row["js"])
    shared = sorted(set(model_js) & set(llm_js))
    if len(shared) < 3:
        raise DatasetError(f"only {len(shared)} bigrams shared between report and "
                           "LLM scores")
    x = [model_js[b] for b in shared]
    y = [llm_js[b] for b in shared]
    slope, intercept, r_squared, p_slope = evaluation.ols_r2(x, y)
    print(json.dumps({"n": len(shared), "slope": slope, "intercept": intercept,
                      "r_squared": r_squared, "p_slope": p_slope},
                     indent=2, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bigram-analogy",
        description="Analogy model and evaluation harness for adjective-noun "
                    "membership inferences")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a dataset and print summary counts")
    p.add_argument("--dataset", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("run", help="run a full experiment from a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("grid", help="grid-search k on the training set")
    p.add_argument("--manifest", required=True)
    p.add_argument("--grid", default=None, help="comma-separated k values")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("baselines", help="uniform/majority/random baselines and "
                                         "the human resampling reference")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=cmd_baselines)

    p = sub.add_parser("augment", help="filter elicited analogies and merge them "
                                       "into the training memory")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("compare", help="OLS of LLM per-bigram JS on model JS")
    p.add_argument("--report", required=True, help="report.json from a run")
    p.add_argument("--llm-scores", required=True,
                   help="CSV adjective,noun,js of LLM divergences")
    p.add_argument("--mem", action="store_true",
                   help="compare against the memorizing run")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, model.ConfigError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (DatasetError, SimilarityError, evaluation.EvaluationError,
            ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
