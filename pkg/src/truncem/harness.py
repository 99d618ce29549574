"""Experiment pipelines: iterate traces, error scaling, type-I error
Monte Carlo, and single fit/infer runs.

Every pipeline is deterministic given its config: replicate r draws its
dataset from seed ``base_seed + r`` and its initialization from an
independent child stream of the same seed, so results do not depend on
the order in which replicates are executed.
"""

import csv
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .datagen import GenSpec, dataset_from_csv, gen_dataset, make_beta_star, make_init
from .em import EmConfig, run_em, run_em_resampled
from .errors import DegenerateInformationError
from .inference import InferenceConfig, score_test, wald_test

#: default initialization distance, as a fraction of ||beta*||, per model
#: (half the basin radius fraction suggested by the local-convergence
#: theory: kappa = 1/4 for the Gaussian mixture, 1/32 for mixture of
#: regression; missing-covariate regression reuses the mixture value)
DEFAULT_REL_ERR = {"GMM": 0.125, "MR": 1.0 / 64.0, "RMC": 0.125}
DEFAULT_SIGMA = {"GMM": 1.0, "MR": 0.1, "RMC": 1.0}
DEFAULT_M_STEP = {"GMM": "exact", "MR": "gradient", "RMC": "gradient"}
BETA_VALUE_CYCLE = (4.0, 4.0, 4.0, 6.0, 6.0)


@dataclass
class ExperimentConfig:
    """Resolved settings for one experiment command.

    ``None`` fields are filled by ``resolve`` with model-dependent
    defaults; the resolved config is echoed into every output for
    provenance.
    """

    model: str = "GMM"
    d: int = 256
    n: int = 100
    s_star: int = 5
    s_hat: int | None = None
    sigma: float | None = None
    p_missing: float = 0.1
    m_step: str | None = None
    eta: float = 1.0
    n_iter: int = 10
    lam: float | None = None
    delta: float = 0.05
    alpha_index: int = 9
    replicates: int = 500
    seed: int = 0
    rel_err: float | None = None
    beta_values: tuple | None = None
    resample: bool = False
    s_star_grid: tuple = (2, 4, 6, 8)
    n_grid: tuple = (200, 400, 800)
    scaling_replicates: int = 20
    scaling_d: int = 128
    out: str | None = None
    data_csv: str | None = None

    def resolve(self):
        if self.sigma is None:
            self.sigma = DEFAULT_SIGMA[self.model]
        if self.m_step is None:
            self.m_step = DEFAULT_M_STEP[self.model]
        if self.s_hat is None:
            self.s_hat = self.s_star
        if self.rel_err is None:
            self.rel_err = DEFAULT_REL_ERR[self.model]
        if self.beta_values is None:
            self.beta_values = default_beta_values(self.s_star)
        return self

    def echo(self):
        """JSON-friendly dump of the resolved configuration."""
        out = asdict(self)
        for key in ("beta_values", "s_star_grid", "n_grid"):
            out[key] = list(out[key]) if out[key] is not None else None
        return out


def default_beta_values(s_star):
    """Nonzero truth entries: the (4, 4, 4, 6, 6) pattern, cycled."""
    return tuple(BETA_VALUE_CYCLE[i % len(BETA_VALUE_CYCLE)] for i in range(s_star))


def init_stream(seed):
    """Child seed for the initialization draw, independent of the
    dataset stream seeded directly with ``seed``."""
    return np.random.SeedSequence(seed, spawn_key=(1,))


def sign_aligned_error(beta_hat, beta_star, tag):
    """l2 error after resolving the +-beta ambiguity of the mixtures."""
    err = np.linalg.norm(beta_hat - beta_star)
    if tag in ("GMM", "MR"):
        err = min(err, float(np.linalg.norm(beta_hat + beta_star)))
    return float(err)


def fit_replicate(cfg: ExperimentConfig, seed):
    """Generate one dataset and fit it; returns (model, trace, beta_star)."""
    beta_star = make_beta_star(cfg.d, cfg.beta_values)
    spec = GenSpec(
        model=cfg.model,
        n=cfg.n,
        d=cfg.d,
        beta_star=beta_star,
        sigma=cfg.sigma,
        p_missing=cfg.p_missing if cfg.model == "RMC" else 0.0,
        seed=seed,
    )
    model = gen_dataset(spec)
    init = make_init(beta_star, cfg.rel_err, init_stream(seed))
    em_cfg = EmConfig(
        s_hat=cfg.s_hat,
        n_iter=cfg.n_iter,
        m_step=cfg.m_step,
        eta=cfg.eta,
        resample=cfg.resample,
    )
    runner = run_em_resampled if cfg.resample else run_em
    trace = runner(model, init, em_cfg)
    return model, trace, beta_star


def run_trace(cfg: ExperimentConfig):
    """One fit; rows of (t, opt_error, est_error, loglik)."""
    cfg.resolve()
    _, trace, beta_star = fit_replicate(cfg, cfg.seed)
    beta_final = trace.estimate
    rows = []
    for t, beta_t in enumerate(trace.iterates):
        rows.append(
            {
                "t": t,
                "opt_error": float(np.linalg.norm(beta_t - beta_final)),
                "est_error": float(np.linalg.norm(beta_t - beta_star)),
                "loglik": trace.logliks[t],
            }
        )
    return rows


def run_scaling(cfg: ExperimentConfig):
    """Error-vs-rate grid: per-replicate rows plus per-cell mean rows."""
    cfg.resolve()
    rows = []
    for s_star in cfg.s_star_grid:
        for n in cfg.n_grid:
            cell = ExperimentConfig(
                model=cfg.model,
                d=cfg.scaling_d,
                n=n,
                s_star=s_star,
                sigma=cfg.sigma,
                p_missing=cfg.p_missing,
                m_step=cfg.m_step,
                eta=cfg.eta,
                n_iter=cfg.n_iter,
                seed=cfg.seed,
            ).resolve()
            x = math.sqrt(s_star * math.log(cfg.scaling_d) / n)
            errs = []
            for r in range(cfg.scaling_replicates):
                _, trace, beta_star = fit_replicate(cell, cfg.seed + r)
                err = sign_aligned_error(trace.estimate, beta_star, cfg.model)
                errs.append(err)
                rows.append(
                    {
                        "kind": "rep",
                        "s_star": s_star,
                        "n": n,
                        "replicate": r,
                        "x": x,
                        "err": err,
                    }
                )
            rows.append(
                {
                    "kind": "mean",
                    "s_star": s_star,
                    "n": n,
                    "replicate": -1,
                    "x": x,
                    "err": float(np.mean(errs)),
                }
            )
    return rows


def infer_replicate(cfg: ExperimentConfig, seed):
    """Fit one replicate and run both tests at the configured coordinate.

    Returns the per-replicate record used by the type-I pipeline; the
    ``degenerate`` flag marks replicates whose plug-in information was
    not positive.
    """
    model, trace, _ = fit_replicate(cfg, seed)
    icfg = InferenceConfig(
        alpha_index=cfg.alpha_index, lam=cfg.lam, delta=cfg.delta, null_value=0.0
    )
    record = {"replicate": None, "degenerate": 0}
    try:
        sres = score_test(model, trace.estimate, icfg)
        wres = wald_test(model, trace.estimate, icfg)
    except DegenerateInformationError:
        record["degenerate"] = 1
        for key in (
            "score_stat",
            "score_p",
            "score_reject",
            "wald_stat",
            "wald_p",
            "wald_reject",
            "ci_lo",
            "ci_hi",
        ):
            record[key] = ""
        return record
    record.update(
        score_stat=sres.statistic,
        score_p=sres.p_value,
        score_reject=int(sres.reject),
        wald_stat=wres.statistic,
        wald_p=wres.p_value,
        wald_reject=int(wres.reject),
        ci_lo=wres.ci_lo,
        ci_hi=wres.ci_hi,
    )
    return record


def run_typeone(cfg: ExperimentConfig):
    """Monte Carlo over generate -> fit -> test pipelines.

    Returns (rows, summary): per-replicate records and a summary dict
    with rejection rates over the non-degenerate replicates.
    """
    cfg.resolve()
    beta_star = make_beta_star(cfg.d, cfg.beta_values)
    if beta_star[cfg.alpha_index] != 0.0:
        raise ValueError(
            f"type-I experiment requires a null coordinate; "
            f"beta_star[{cfg.alpha_index}] = {beta_star[cfg.alpha_index]}"
        )
    rows = []
    for r in range(cfg.replicates):
        record = infer_replicate(cfg, cfg.seed + r)
        record["replicate"] = r
        rows.append(record)
    valid = [row for row in rows if not row["degenerate"]]
    n_valid = len(valid)
    summary = {
        "replicates": cfg.replicates,
        "degenerate": cfg.replicates - n_valid,
        "score_rejection_rate": (
            sum(row["score_reject"] for row in valid) / n_valid if n_valid else None
        ),
        "wald_rejection_rate": (
            sum(row["wald_reject"] for row in valid) / n_valid if n_valid else None
        ),
        "config": cfg.echo(),
    }
    return rows, summary


def _load_or_generate(cfg: ExperimentConfig, seed):
    if cfg.data_csv is not None:
        model = dataset_from_csv(
            cfg.model,
            cfg.data_csv,
            sigma=cfg.sigma,
            p_missing=cfg.p_missing,
        )
        beta_star = make_beta_star(model.dim, cfg.beta_values)
        init = make_init(beta_star, cfg.rel_err, init_stream(seed))
        em_cfg = EmConfig(
            s_hat=cfg.s_hat,
            n_iter=cfg.n_iter,
            m_step=cfg.m_step,
            eta=cfg.eta,
            resample=cfg.resample,
        )
        runner = run_em_resampled if cfg.resample else run_em
        trace = runner(model, init, em_cfg)
        return model, trace, beta_star
    return fit_replicate(cfg, seed)


def run_fit(cfg: ExperimentConfig):
    """Single fit; JSON-ready summary with the estimate and trace."""
    cfg.resolve()
    model, trace, beta_star = _load_or_generate(cfg, cfg.seed)
    beta_hat = trace.estimate
    return {
        "beta_hat": [float(v) for v in beta_hat],
        "support": [int(j) for j in np.flatnonzero(beta_hat)],
        "n_iterations": len(trace.iterates) - 1,
        "final_loglik": trace.logliks[-1],
        "opt_errors": [
            float(np.linalg.norm(b - beta_hat)) for b in trace.iterates
        ],
        "est_error": sign_aligned_error(beta_hat, beta_star, cfg.model),
        "config": cfg.echo(),
    }


def run_infer(cfg: ExperimentConfig):
    """Single generate/load -> fit -> test run; JSON-ready result."""
    cfg.resolve()
    model, trace, _ = _load_or_generate(cfg, cfg.seed)
    icfg = InferenceConfig(
        alpha_index=cfg.alpha_index, lam=cfg.lam, delta=cfg.delta, null_value=0.0
    )
    out = {"config": cfg.echo()}
    try:
        sres = score_test(model, trace.estimate, icfg)
        wres = wald_test(model, trace.estimate, icfg)
    except DegenerateInformationError as exc:
        out["degenerate"] = True
        out["error"] = str(exc)
        return out
    out["degenerate"] = False
    out["score"] = {
        "statistic": sres.statistic,
        "p_value": sres.p_value,
        "reject": bool(sres.reject),
    }
    out["wald"] = {
        "statistic": wres.statistic,
        "p_value": wres.p_value,
        "reject": bool(wres.reject),
        "ci_lo": wres.ci_lo,
        "ci_hi": wres.ci_hi,
        "info_scalar": wres.info_scalar,
    }
    return out


def write_csv(rows, path):
    """Write dict rows as CSV with round-trip float formatting."""
    if not rows:
        raise ValueError("no rows to write")
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            header = list(rows[0].keys())
            writer.writerow(header)
            for row in rows:
                writer.writerow(
                    [repr(float(v)) if isinstance(v, float) else v
                     for v in (row[k] for k in header)]
                )
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def write_json(obj, path):
    try:
        with open(path, "w") as fh:
            json.dump(obj, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write JSON to {path}: {exc}") from exc
