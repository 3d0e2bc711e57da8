"""Experiment orchestration: seeding, multi-run execution, persistence.

Per-run seeds are derived as ``SeedSequence([master_seed, run_index])``,
so the stream for run r never depends on how many runs are requested or
on execution order.  Wall-clock timings go to a separate file and are
excluded from the deterministic report contract.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, asdict, replace

import numpy as np

from .beta_math import Beta4Params
from .data import Dataset, Normalizer, fit_transform, split
from .engine import Beta4UCS, EngineConfig, REP_TRI
from .metrics import EvalReport, accuracy, confusion_matrix, macro_f1
from .problems import ProblemSpec, generate, parse_problem
from .rules import Rule, TriangleSet, make_rule


@dataclass
class ExperimentConfig:
    """What to run: data source, engine setup, split protocol, run count."""

    engine: EngineConfig = field(default_factory=EngineConfig)
    problem: str | None = None
    dataset_path: str | None = None
    label_col: int = -1
    header: bool = False
    n_samples: int = 6000
    protocol: str = "shuffle"
    ratio: float = 0.9
    k: int = 10
    runs: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if (self.problem is None) == (self.dataset_path is None):
            raise ValueError("exactly one of problem or dataset_path is required")
        if self.protocol not in ("shuffle", "stratified_shuffle", "kfold", "all"):
            raise ValueError(f"unknown protocol {self.protocol!r}")


def run_seed(master_seed: int, run_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master_seed, run_index])


@dataclass
class RunResult:
    report: EvalReport
    trace: list
    snapshot: "ModelSnapshot"


def _folds_for_run(cfg: ExperimentConfig, split_seed: int):
    if cfg.problem is not None:
        spec = parse_problem(cfg.problem)
        ds = generate(spec, cfg.n_samples, split_seed)
        norm = None
    else:
        ds = load_dataset(cfg)
        norm = "fit"
    if cfg.protocol == "all":
        folds = [(ds, ds)]
    else:
        folds = split(ds, cfg.protocol, split_seed, ratio=cfg.ratio, k=cfg.k)
    out = []
    for tr, te in folds:
        if norm == "fit":
            tr, te, n = fit_transform(tr, te)
        else:
            n = None
        out.append((tr, te, n))
    return ds, out


def load_dataset(cfg: ExperimentConfig) -> Dataset:
    from .data import load_csv
    return load_csv(cfg.dataset_path, label_col=cfg.label_col, header=cfg.header)


def run_one(cfg: ExperimentConfig, run_index: int) -> RunResult:
    """Execute split, training, and evaluation for a single run."""
    ss = run_seed(cfg.seed, run_index)
    split_child, engine_child = ss.spawn(2)
    split_seed = int(split_child.generate_state(1)[0])
    ds, folds = _folds_for_run(cfg, split_seed)

    started = time.perf_counter()
    conf = np.zeros((ds.n_classes, ds.n_classes), dtype=np.int64)
    train_hits = 0
    train_total = 0
    macro_rules = 0
    micro_rules = 0
    crisp = 0.0
    trace = []
    model = None
    norm = None
    for fold_idx, (tr, te, n) in enumerate(folds):
        rng = np.random.default_rng(engine_child.spawn(1)[0]) if len(folds) > 1 \
            else np.random.default_rng(engine_child)
        model = Beta4UCS(cfg.engine, ds.n_dims, ds.n_classes, rng)
        fold_trace = model.train(tr.features, tr.labels)
        if fold_idx == 0:
            trace = fold_trace
        pred = model.predict(te.features)
        conf += confusion_matrix(te.labels, pred, ds.n_classes)
        train_pred = model.predict(tr.features)
        train_hits += int((train_pred == tr.labels).sum())
        train_total += len(tr.labels)
        macro_rules += model.n_macro
        micro_rules += model.n_micro
        crisp += model.crisp_fraction()
        norm = n
    elapsed = time.perf_counter() - started

    nf = len(folds)
    report = EvalReport(
        accuracy=accuracy(conf),
        macro_f1=macro_f1(conf),
        confusion=conf.tolist(),
        macro_rules=round(macro_rules / nf),
        micro_rules=round(micro_rules / nf),
        crisp_fraction=crisp / nf,
        train_accuracy=train_hits / train_total,
        wall_time=elapsed,
    )
    snapshot = ModelSnapshot.from_model(model, ds, norm)
    return RunResult(report, trace, snapshot)


def _mean_ci(values: list[float]) -> dict:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    if arr.size < 2:
        return {"mean": mean, "ci95": 0.0}
    from scipy.stats import t
    sem = float(arr.std(ddof=1)) / math.sqrt(arr.size)
    return {"mean": mean, "ci95": float(t.ppf(0.975, arr.size - 1)) * sem}


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> dict:
    """Run all repetitions, optionally writing artifacts, and return the
    aggregate summary."""
    results = []
    timings = {}
    for r in range(cfg.runs):
        res = run_one(cfg, r)
        results.append(res)
        timings[f"run_{r}"] = res.report.wall_time
        if out_dir is not None:
            _write_run(out_dir, r, res)
    aggregate = {
        "runs": cfg.runs,
        "accuracy": _mean_ci([r.report.accuracy for r in results]),
        "macro_f1": _mean_ci([r.report.macro_f1 for r in results]),
        "train_accuracy": _mean_ci([r.report.train_accuracy for r in results]),
        "macro_rules": _mean_ci([float(r.report.macro_rules) for r in results]),
        "micro_rules": _mean_ci([float(r.report.micro_rules) for r in results]),
        "crisp_fraction": _mean_ci([r.report.crisp_fraction for r in results]),
    }
    if out_dir is not None:
        _dump_json(out_dir / "report.json", aggregate)
        _dump_json(out_dir / "timings.json", timings)
    return {"aggregate": aggregate, "results": results}


def _dump_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_run(out_dir, r: int, res: RunResult):
    from pathlib import Path
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _dump_json(out_dir / f"run_{r}.json", res.report.to_dict())
    with open(out_dir / f"trace_{r}.csv", "w") as fh:
        fh.write("epoch,train_accuracy,macro_rules,micro_rules,crisp_fraction\n")
        for epoch, acc, macro, micro, cf in res.trace:
            fh.write(f"{epoch},{acc:.6f},{macro},{micro},{cf:.6f}\n")
    res.snapshot.save(out_dir / f"model_{r}.json")
    with open(out_dir / f"rules_{r}.txt", "w") as fh:
        fh.write(export_rules(res.snapshot, denormalize=True))


# ----- model persistence ----------------------------------------------


@dataclass
class ModelSnapshot:
    """Lossless serialized form of a trained model plus its data context."""

    engine: EngineConfig
    n_dims: int
    n_classes: int
    class_names: list
    attribute_names: list
    fallback_class: int
    rules: list[Rule]
    normalizer: Normalizer | None = None

    @classmethod
    def from_model(cls, model: Beta4UCS, ds: Dataset,
                   norm: Normalizer | None) -> "ModelSnapshot":
        return cls(engine=model.cfg, n_dims=model.n_dims, n_classes=model.n_classes,
                   class_names=list(ds.class_names),
                   attribute_names=list(ds.attribute_names),
                   fallback_class=model.fallback_class,
                   rules=model.to_rules(), normalizer=norm)

    def to_model(self) -> Beta4UCS:
        model = Beta4UCS(self.engine, self.n_dims, self.n_classes,
                         np.random.default_rng(0))
        model.fallback_class = self.fallback_class
        model.load_rules(self.rules)
        return model

    def to_dict(self) -> dict:
        rules = []
        for r in self.rules:
            cond = []
            for fs in r.condition:
                if isinstance(fs, Beta4Params):
                    cond.append([fs.alpha, fs.beta, fs.lower, fs.upper])
                else:
                    cond.append([fs.a, fs.b, fs.c])
            rules.append({"condition": cond, "consequent": r.consequent,
                          "cm": list(map(float, r.cm)), "fitness": r.fitness,
                          "exp": r.exp, "num": r.num, "cs": r.cs,
                          "ga_ts": r.ga_ts})
        return {
            "engine": asdict(self.engine),
            "n_dims": self.n_dims,
            "n_classes": self.n_classes,
            "class_names": self.class_names,
            "attribute_names": self.attribute_names,
            "fallback_class": self.fallback_class,
            "normalizer": None if self.normalizer is None else {
                "mins": list(map(float, self.normalizer.mins)),
                "maxs": list(map(float, self.normalizer.maxs)),
            },
            "rules": rules,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSnapshot":
        engine = EngineConfig(**d["engine"])
        rules = []
        for rd in d["rules"]:
            if engine.representation == REP_TRI:
                cond = tuple(TriangleSet(*p) for p in rd["condition"])
            else:
                cond = tuple(Beta4Params(*p) for p in rd["condition"])
            r = make_rule(cond, rd["consequent"], d["n_classes"], ga_ts=rd["ga_ts"])
            r.cm = np.asarray(rd["cm"], dtype=float)
            r.fitness = rd["fitness"]
            r.exp = rd["exp"]
            r.num = rd["num"]
            r.cs = rd["cs"]
            rules.append(r)
        norm = d.get("normalizer")
        return cls(engine=engine, n_dims=d["n_dims"], n_classes=d["n_classes"],
                   class_names=d["class_names"],
                   attribute_names=d["attribute_names"],
                   fallback_class=d["fallback_class"], rules=rules,
                   normalizer=None if norm is None
                   else Normalizer(np.asarray(norm["mins"]), np.asarray(norm["maxs"])))

    def save(self, path):
        _dump_json(path, self.to_dict())

    @classmethod
    def load(cls, path) -> "ModelSnapshot":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def predict(self, features: np.ndarray) -> np.ndarray:
        feats = np.asarray(features, dtype=float)
        if self.normalizer is not None:
            feats = self.normalizer.transform(feats, clip=True)
        return self.to_model().predict(feats)


def export_rules(snapshot: ModelSnapshot, denormalize: bool = False) -> str:
    """Human-readable one-line-per-macro-rule listing.

    Rectangular dimensions render as intervals, fuzzy ones with their
    full parameter tuple; ``denormalize`` maps bounds back through the
    stored min-max ranges.
    """
    norm = snapshot.normalizer if denormalize else None
    names = snapshot.attribute_names
    lines = []
    for r in snapshot.rules:
        parts = []
        for i, fs in enumerate(r.condition):
            name = names[i] if i < len(names) else f"x{i + 1}"
            if isinstance(fs, TriangleSet):
                a, b, c = fs.a, fs.b, fs.c
                if norm is not None:
                    a, b, c = (norm.mins[i] + v * (norm.maxs[i] - norm.mins[i])
                               for v in (a, b, c))
                parts.append(f"{name} is Triangle({a:.2f},{b:.2f},{c:.2f})")
                continue
            lo, up = fs.lower, fs.upper
            if norm is not None:
                span = norm.maxs[i] - norm.mins[i]
                lo = norm.mins[i] + lo * span
                up = norm.mins[i] + up * span
            if fs.is_rectangular:
                parts.append(f"{name} ∈ [{lo:.2f},{up:.2f}]")
            else:
                parts.append(f"{name} is Beta4({fs.alpha:.2f},{fs.beta:.2f},"
                             f"{lo:.2f},{up:.2f})")
        cls_name = snapshot.class_names[r.consequent] \
            if r.consequent < len(snapshot.class_names) else str(r.consequent)
        lines.append(f"IF {' AND '.join(parts)} THEN class {cls_name} "
                     f"(F={r.fitness:.3f}, exp={r.exp:.1f}, num={r.num})")
    return "\n".join(lines) + ("\n" if lines else "")
