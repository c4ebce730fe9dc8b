"""Autoregressive band-row generator.

The model reads framed band rows (indicator column + band cells) one at a
time and predicts the next row through an input MLP, a GRU stack, and an
output MLP, with batch normalization after each MLP's first linear layer.
Everything is float64 numpy with hand-written gradients: at these widths
a framework buys nothing, and exact control over the arithmetic keeps
runs bit-reproducible.

Parameters live in a flat dict of named tensors; batch-norm running
means/variances ride along under ``*_mean``/``*_var`` names and are
excluded from optimization.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass

import numpy as np

from .errors import BandOverflowError, FormatError, InputError
from .graph import (
    BandMatrix,
    Graph,
    band_expand,
    band_reparameterize,
    bandwidth_of_ordering,
    identity_ordering,
    to_sequence,
)
from .metrics import average_precision
from .ordering import OrderingConfig, _bfs_order_rng, cuthill_mckee, make_ordering
from .rng import derive_rng, derive_seed

__all__ = [
    "ModelConfig",
    "init_params",
    "forward_batch",
    "backward_batch",
    "bce_with_logits",
    "cosine_lr",
    "sequence_array",
    "train",
    "sample",
    "log_likelihood",
    "reconstruction_auprc",
    "estimate_row_width",
    "random_search",
    "save_checkpoint",
    "load_checkpoint",
    "CHECKPOINT_FORMAT",
]

CHECKPOINT_FORMAT = "bandgen-checkpoint-v1"

_BN_EPS = 1e-5
_BN_MOMENTUM = 0.1


@dataclass(frozen=True)
class ModelConfig:
    """Sizes, optimization schedule, and sampling controls.

    ``row_width`` is the framed row length (indicator plus band cells),
    so the band width the model can express is ``row_width - 1``.
    """

    row_width: int
    hidden: int = 128
    gru_layers: int = 4
    mlp_hidden: int = 128
    lr: float = 1e-3
    weight_decay: float = 0.0
    epochs: int = 100
    batches_per_epoch: int = 30
    val_batches: int = 9
    batch_size: int = 32
    temperature: float = 1.0
    max_nodes: int = 500
    seed: int = 0

    def __post_init__(self):
        positive = {
            "row_width": self.row_width,
            "hidden": self.hidden,
            "gru_layers": self.gru_layers,
            "mlp_hidden": self.mlp_hidden,
            "epochs": self.epochs,
            "batches_per_epoch": self.batches_per_epoch,
            "val_batches": self.val_batches,
            "batch_size": self.batch_size,
            "max_nodes": self.max_nodes,
        }
        for name, value in positive.items():
            if value < 1:
                raise InputError(f"{name} must be positive, got {value}")
        if self.row_width < 2:
            raise InputError(
                f"row_width needs the indicator plus at least one band cell, got {self.row_width}"
            )
        if self.lr <= 0:
            raise InputError(f"lr must be positive, got {self.lr}")
        if self.weight_decay < 0:
            raise InputError(f"weight_decay must be non-negative, got {self.weight_decay}")
        if self.temperature <= 0:
            raise InputError(f"temperature must be positive, got {self.temperature}")


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -60.0, 60.0)))


def init_params(cfg: ModelConfig, seed: int | None = None) -> dict[str, np.ndarray]:
    """Uniform(+-1/sqrt(fan_in)) weights, zero biases, unit BN scales."""
    rng = derive_rng(cfg.seed if seed is None else seed, 0)
    d, h, m = cfg.row_width, cfg.hidden, cfg.mlp_hidden

    def uni(rows: int, cols: int) -> np.ndarray:
        bound = 1.0 / math.sqrt(cols)
        return rng.uniform(-bound, bound, size=(rows, cols))

    p: dict[str, np.ndarray] = {}
    p["in1_w"] = uni(m, d)
    p["in1_b"] = np.zeros(m)
    p["in_bn_gamma"] = np.ones(m)
    p["in_bn_beta"] = np.zeros(m)
    p["in_bn_mean"] = np.zeros(m)
    p["in_bn_var"] = np.ones(m)
    p["in2_w"] = uni(h, m)
    p["in2_b"] = np.zeros(h)
    for l in range(cfg.gru_layers):
        for gate in ("z", "r", "c"):
            p[f"gru{l}_w{gate}"] = uni(h, h)
            p[f"gru{l}_u{gate}"] = uni(h, h)
            p[f"gru{l}_b{gate}"] = np.zeros(h)
    p["out1_w"] = uni(m, h)
    p["out1_b"] = np.zeros(m)
    p["out_bn_gamma"] = np.ones(m)
    p["out_bn_beta"] = np.zeros(m)
    p["out_bn_mean"] = np.zeros(m)
    p["out_bn_var"] = np.ones(m)
    p["out2_w"] = uni(d, m)
    p["out2_b"] = np.zeros(d)
    return p


def trainable_names(params: dict[str, np.ndarray]) -> list[str]:
    return sorted(k for k in params if not k.endswith(("_mean", "_var")))


def _copy_params(params: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    return {k: v.copy() for k, v in params.items()}


# --- layers -----------------------------------------------------------------


def _bn_forward(x, params, prefix, train):
    gamma = params[f"{prefix}_gamma"]
    beta = params[f"{prefix}_beta"]
    if train:
        mu = x.mean(axis=0)
        var = x.var(axis=0)
        xhat = (x - mu) / np.sqrt(var + _BN_EPS)
        params[f"{prefix}_mean"] *= 1.0 - _BN_MOMENTUM
        params[f"{prefix}_mean"] += _BN_MOMENTUM * mu
        params[f"{prefix}_var"] *= 1.0 - _BN_MOMENTUM
        params[f"{prefix}_var"] += _BN_MOMENTUM * var
        return gamma * xhat + beta, (xhat, var)
    xhat = (x - params[f"{prefix}_mean"]) / np.sqrt(params[f"{prefix}_var"] + _BN_EPS)
    return gamma * xhat + beta, None


def _bn_backward(dy, cache, gamma):
    xhat, var = cache
    dgamma = (dy * xhat).sum(axis=0)
    dbeta = dy.sum(axis=0)
    dxhat = dy * gamma
    dx = (
        dxhat - dxhat.mean(axis=0) - xhat * (dxhat * xhat).mean(axis=0)
    ) / np.sqrt(var + _BN_EPS)
    return dx, dgamma, dbeta


def _gru_step(params, l, x_t, h_prev):
    az = x_t @ params[f"gru{l}_wz"].T + h_prev @ params[f"gru{l}_uz"].T + params[f"gru{l}_bz"]
    z = _sigmoid(az)
    ar = x_t @ params[f"gru{l}_wr"].T + h_prev @ params[f"gru{l}_ur"].T + params[f"gru{l}_br"]
    r = _sigmoid(ar)
    hu = h_prev @ params[f"gru{l}_uc"].T
    ac = x_t @ params[f"gru{l}_wc"].T + r * hu + params[f"gru{l}_bc"]
    c = np.tanh(ac)
    h = z * h_prev + (1.0 - z) * c
    return h, (x_t, h_prev, z, r, c, hu)


def _in_mlp(params, x, train):
    a1 = x @ params["in1_w"].T + params["in1_b"]
    bn, bn_cache = _bn_forward(a1, params, "in_bn", train)
    r1 = np.maximum(bn, 0.0)
    out = r1 @ params["in2_w"].T + params["in2_b"]
    return out, (x, bn, bn_cache, r1)


def _out_mlp(params, h, train):
    a3 = h @ params["out1_w"].T + params["out1_b"]
    bn, bn_cache = _bn_forward(a3, params, "out_bn", train)
    r2 = np.maximum(bn, 0.0)
    logits = r2 @ params["out2_w"].T + params["out2_b"]
    return logits, (h, bn, bn_cache, r2)


def _pack(seqs: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stack (L, d) sequences into padded inputs, targets, and a step mask."""
    d = seqs[0].shape[1]
    t_max = max(s.shape[0] for s in seqs) - 1
    x = np.zeros((len(seqs), t_max, d))
    y = np.zeros((len(seqs), t_max, d))
    mask = np.zeros((len(seqs), t_max), dtype=bool)
    for b, s in enumerate(seqs):
        steps = s.shape[0] - 1
        x[b, :steps] = s[:-1]
        y[b, :steps] = s[1:]
        mask[b, :steps] = True
    return x, y, mask


def forward_batch(params, cfg: ModelConfig, x, mask, train: bool):
    """Logits for every valid step, flattened in (batch, time) order."""
    bsz, t_max, _ = x.shape
    h_dim = cfg.hidden
    flat_x = x[mask]
    x2, in_cache = _in_mlp(params, flat_x, train)
    g = np.zeros((bsz, t_max, h_dim))
    g[mask] = x2
    layer_caches = []
    inp = g
    for l in range(cfg.gru_layers):
        h_prev = np.zeros((bsz, h_dim))
        out = np.zeros((bsz, t_max, h_dim))
        steps = []
        for t in range(t_max):
            h_prev, step_cache = _gru_step(params, l, inp[:, t], h_prev)
            steps.append(step_cache)
            out[:, t] = h_prev
        layer_caches.append(steps)
        inp = out
    flat_h = inp[mask]
    logits, out_cache = _out_mlp(params, flat_h, train)
    cache = (mask, in_cache, layer_caches, out_cache, bsz, t_max)
    return logits, cache


def backward_batch(params, cfg: ModelConfig, cache, dlogits):
    """Gradients for every trainable tensor, given d(loss)/d(logits)."""
    mask, in_cache, layer_caches, out_cache, bsz, t_max = cache
    grads = {k: np.zeros_like(params[k]) for k in trainable_names(params)}

    flat_h, bn2, bn2_cache, r2 = out_cache
    grads["out2_w"] += dlogits.T @ r2
    grads["out2_b"] += dlogits.sum(axis=0)
    dr2 = dlogits @ params["out2_w"]
    dbn2 = dr2 * (bn2 > 0.0)
    da3, dg2, db2 = _bn_backward(dbn2, bn2_cache, params["out_bn_gamma"])
    grads["out_bn_gamma"] += dg2
    grads["out_bn_beta"] += db2
    grads["out1_w"] += da3.T @ flat_h
    grads["out1_b"] += da3.sum(axis=0)
    dflat_h = da3 @ params["out1_w"]

    d_above = np.zeros((bsz, t_max, cfg.hidden))
    d_above[mask] = dflat_h
    for l in range(cfg.gru_layers - 1, -1, -1):
        steps = layer_caches[l]
        d_below = np.zeros((bsz, t_max, cfg.hidden))
        dh_next = np.zeros((bsz, cfg.hidden))
        wz, wr, wc = (params[f"gru{l}_w{g}"] for g in "zrc")
        uz, ur, uc = (params[f"gru{l}_u{g}"] for g in "zrc")
        for t in range(t_max - 1, -1, -1):
            dh = d_above[:, t] + dh_next
            x_t, h_prev, z, r, c, hu = steps[t]
            dz = dh * (h_prev - c)
            dc = dh * (1.0 - z)
            dac = dc * (1.0 - c * c)
            dr = dac * hu
            dhu = dac * r
            daz = dz * z * (1.0 - z)
            dar = dr * r * (1.0 - r)
            grads[f"gru{l}_wz"] += daz.T @ x_t
            grads[f"gru{l}_uz"] += daz.T @ h_prev
            grads[f"gru{l}_bz"] += daz.sum(axis=0)
            grads[f"gru{l}_wr"] += dar.T @ x_t
            grads[f"gru{l}_ur"] += dar.T @ h_prev
            grads[f"gru{l}_br"] += dar.sum(axis=0)
            grads[f"gru{l}_wc"] += dac.T @ x_t
            grads[f"gru{l}_uc"] += dhu.T @ h_prev
            grads[f"gru{l}_bc"] += dac.sum(axis=0)
            d_below[:, t] = daz @ wz + dar @ wr + dac @ wc
            dh_next = dh * z + daz @ uz + dar @ ur + dhu @ uc
        d_above = d_below

    dx2 = d_above[mask]
    flat_x, bn1, bn1_cache, r1 = in_cache
    grads["in2_w"] += dx2.T @ r1
    grads["in2_b"] += dx2.sum(axis=0)
    dr1 = dx2 @ params["in2_w"]
    dbn1 = dr1 * (bn1 > 0.0)
    da1, dg1, db1 = _bn_backward(dbn1, bn1_cache, params["in_bn_gamma"])
    grads["in_bn_gamma"] += dg1
    grads["in_bn_beta"] += db1
    grads["in1_w"] += da1.T @ flat_x
    grads["in1_b"] += da1.sum(axis=0)
    return grads


def bce_with_logits(logits, targets):
    """Mean binary cross-entropy and its gradient w.r.t. the logits."""
    z = logits
    y = targets
    loss = np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z)))
    return float(loss.mean()), (_sigmoid(z) - y) / z.size


# --- optimization -----------------------------------------------------------


def cosine_lr(base: float, step: int, total: int) -> float:
    """Cosine annealing from ``base`` at step 0 to 0 at step total-1."""
    if total <= 1:
        return base
    return base * 0.5 * (1.0 + math.cos(math.pi * step / (total - 1)))


def _adamw_init(params):
    names = trainable_names(params)
    return {
        "t": 0,
        "m": {k: np.zeros_like(params[k]) for k in names},
        "v": {k: np.zeros_like(params[k]) for k in names},
    }


def _adamw_step(params, grads, state, lr, weight_decay, b1=0.9, b2=0.999, eps=1e-8):
    state["t"] += 1
    t = state["t"]
    for k in trainable_names(params):
        g = grads[k]
        m = state["m"][k]
        v = state["v"][k]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        mhat = m / (1.0 - b1**t)
        vhat = v / (1.0 - b2**t)
        params[k] -= lr * (mhat / (np.sqrt(vhat) + eps) + weight_decay * params[k])


# --- sequences and training -------------------------------------------------


def sequence_array(
    g: Graph,
    ordering_cfg: OrderingConfig,
    width: int,
    seed: int,
    retries: int = 50,
) -> np.ndarray:
    """Framed band rows of ``g`` under a fresh ordering, as (L, d) float64.

    Orderings occasionally land outside the band; those draws are
    discarded and reseeded up to ``retries`` times before the overflow is
    allowed to surface.
    """
    last: BandOverflowError | None = None
    for attempt in range(retries):
        o = make_ordering(g, ordering_cfg.reseeded(derive_seed(seed, attempt)))
        try:
            b = band_reparameterize(g, o, width)
        except BandOverflowError as exc:
            last = exc
            continue
        return np.array(to_sequence(b).rows, dtype=np.float64)
    assert last is not None
    raise last


def train(
    params: dict[str, np.ndarray],
    cfg: ModelConfig,
    train_graphs: list[Graph],
    val_graphs: list[Graph],
    ordering_cfg: OrderingConfig,
) -> tuple[dict[str, np.ndarray], list[dict]]:
    """AdamW training with fresh per-epoch orderings.

    Every epoch redraws one ordering per graph (data augmentation over the
    ordering family), trains ``batches_per_epoch`` sampled batches under a
    cosine-annealed learning rate, and scores ``val_batches`` batches in
    eval mode.  Returns the parameters of the best validation epoch and
    the per-epoch history.
    """
    if not train_graphs:
        raise InputError("training needs at least one graph")
    if not val_graphs:
        raise InputError("validation needs at least one graph")
    width = cfg.row_width - 1
    state = _adamw_init(params)
    total_steps = cfg.epochs * cfg.batches_per_epoch
    history: list[dict] = []
    best_val = math.inf
    best = _copy_params(params)
    step = 0
    for epoch in range(cfg.epochs):
        tr = [
            sequence_array(g, ordering_cfg, width, derive_seed(cfg.seed, 1, epoch, i))
            for i, g in enumerate(train_graphs)
        ]
        va = [
            sequence_array(g, ordering_cfg, width, derive_seed(cfg.seed, 2, epoch, i))
            for i, g in enumerate(val_graphs)
        ]
        batch_rng = derive_rng(cfg.seed, 3, epoch)
        lr_now = cfg.lr
        losses = []
        for _ in range(cfg.batches_per_epoch):
            idx = batch_rng.choice(
                len(tr), size=cfg.batch_size, replace=len(tr) < cfg.batch_size
            )
            x, y, mask = _pack([tr[j] for j in idx])
            logits, cache = forward_batch(params, cfg, x, mask, train=True)
            loss, dlogits = bce_with_logits(logits, y[mask])
            grads = backward_batch(params, cfg, cache, dlogits)
            lr_now = cosine_lr(cfg.lr, step, total_steps)
            _adamw_step(params, grads, state, lr_now, cfg.weight_decay)
            step += 1
            losses.append(loss)
        val_rng = derive_rng(cfg.seed, 4, epoch)
        val_losses = []
        for _ in range(cfg.val_batches):
            idx = val_rng.choice(
                len(va), size=cfg.batch_size, replace=len(va) < cfg.batch_size
            )
            x, y, mask = _pack([va[j] for j in idx])
            logits, _ = forward_batch(params, cfg, x, mask, train=False)
            vloss, _ = bce_with_logits(logits, y[mask])
            val_losses.append(vloss)
        val_bce = float(np.mean(val_losses))
        history.append(
            {
                "epoch": epoch,
                "train_bce": float(np.mean(losses)),
                "val_bce": val_bce,
                "lr": lr_now,
            }
        )
        if val_bce < best_val:
            best_val = val_bce
            best = _copy_params(params)
    return best, history


# --- inference --------------------------------------------------------------


def _step_eval(params, cfg: ModelConfig, x, states):
    x2, _ = _in_mlp(params, x, train=False)
    new_states = []
    h = x2
    for l in range(cfg.gru_layers):
        h, _ = _gru_step(params, l, h, states[l])
        new_states.append(h)
    logits, _ = _out_mlp(params, h, train=False)
    return logits, new_states


def sample(
    params: dict[str, np.ndarray], cfg: ModelConfig, count: int, seed: int = 0
) -> list[Graph]:
    """Draw graphs by autoregressive Bernoulli sampling of band rows.

    Each chain starts from the indicator row and stops when it samples an
    indicator or reaches ``max_nodes``.  Cells beyond the admissible band
    prefix are masked to zero before being fed back.  Logits are divided
    by ``temperature`` before the sigmoid.  A chain that stops before
    emitting any row decodes to a single-node graph.
    """
    if count < 1:
        raise InputError(f"sample count must be positive, got {count}")
    d = cfg.row_width
    width = d - 1
    rng = np.random.default_rng(seed)
    states = [np.zeros((count, cfg.hidden)) for _ in range(cfg.gru_layers)]
    x = np.zeros((count, d))
    x[:, 0] = 1.0
    done = np.zeros(count, dtype=bool)
    rows: list[list[tuple[int, ...]]] = [[] for _ in range(count)]
    for j in range(cfg.max_nodes):
        logits, states = _step_eval(params, cfg, x, states)
        probs = _sigmoid(logits / cfg.temperature)
        draws = rng.random((count, d)) < probs
        active = ~done & ~draws[:, 0]
        keep = min(j, width)
        x = np.zeros((count, d))
        if keep:
            x[active, 1 : 1 + keep] = draws[active, 1 : 1 + keep]
        for b in np.nonzero(active)[0]:
            rows[b].append(tuple(int(t) for t in draws[b, 1 : 1 + keep]))
        done |= draws[:, 0]
        if done.all():
            break
    out = []
    for chain in rows:
        if not chain:
            out.append(Graph(n=1, adj=((),)))
            continue
        bm = BandMatrix(n=len(chain), width=width, rows=tuple(chain))
        out.append(band_expand(bm, identity_ordering(len(chain))))
    return out


def log_likelihood(
    params: dict[str, np.ndarray],
    cfg: ModelConfig,
    g: Graph,
    ordering_cfg: OrderingConfig,
) -> float:
    """Log-probability of ``g``'s framed rows under one sampled ordering."""
    seq = sequence_array(g, ordering_cfg, cfg.row_width - 1, ordering_cfg.seed)
    x, y, mask = _pack([seq])
    logits, _ = forward_batch(params, cfg, x, mask, train=False)
    t = y[mask]
    per_cell = np.maximum(logits, 0.0) - logits * t + np.log1p(np.exp(-np.abs(logits)))
    return float(-per_cell.sum())


def reconstruction_auprc(
    params: dict[str, np.ndarray],
    cfg: ModelConfig,
    graphs: list[Graph],
    ordering_cfg: OrderingConfig,
) -> float:
    """Pooled average precision of next-row cell predictions."""
    if not graphs:
        raise InputError("needs at least one graph")
    scores = []
    labels = []
    for i, g in enumerate(graphs):
        seq = sequence_array(
            g, ordering_cfg, cfg.row_width - 1, derive_seed(ordering_cfg.seed, 5, i)
        )
        x, y, mask = _pack([seq])
        logits, _ = forward_batch(params, cfg, x, mask, train=False)
        scores.append(_sigmoid(logits).ravel())
        labels.append(y[mask].ravel())
    return average_precision(np.concatenate(scores), np.concatenate(labels))


def estimate_row_width(
    graphs: list[Graph],
    mode: str,
    ordering_cfg: OrderingConfig,
    samples: int = 100_000,
) -> int:
    """Framed row length needed by each training mode.

    Band mode: one Cuthill-McKee ordering per graph, row width one more
    than the worst bandwidth seen.  Baseline mode: ``samples`` random BFS
    orderings spread round-robin over the corpus, row width one more than
    the 99.9th-percentile (nearest-rank) bandwidth, which tracks how wide
    unconstrained orderings actually get.
    """
    if not graphs:
        raise InputError("width estimation needs at least one graph")
    if mode == "bwr":
        worst = 0
        for i, g in enumerate(graphs):
            o = cuthill_mckee(g, ordering_cfg.reseeded(derive_seed(ordering_cfg.seed, 6, i)))
            worst = max(worst, bandwidth_of_ordering(g, o))
        return 1 + max(worst, 1)
    if mode == "baseline":
        if samples < 1:
            raise InputError(f"need a positive sample count, got {samples}")
        rng = derive_rng(ordering_cfg.seed, 7)
        bws = np.empty(samples, dtype=np.int64)
        for s in range(samples):
            g = graphs[s % len(graphs)]
            bws[s] = bandwidth_of_ordering(g, _bfs_order_rng(g, rng))
        bws.sort()
        rank = math.ceil(0.999 * samples)
        return 1 + max(int(bws[rank - 1]), 1)
    raise InputError(f"unknown mode {mode!r}, expected 'bwr' or 'baseline'")


def random_search(
    space: dict[str, tuple[float, float]],
    trials: int,
    objective,
    seed: int = 0,
) -> tuple[dict[str, float], list[dict]]:
    """Log-uniform random search; returns the best draw and the trial log.

    ``objective`` maps a draw dict to a float to minimize; ties keep the
    earlier trial.
    """
    if trials < 1:
        raise InputError(f"need a positive trial count, got {trials}")
    for name, (lo, hi) in space.items():
        if not 0 < lo <= hi:
            raise InputError(f"bad range for {name!r}: ({lo}, {hi})")
    rng = derive_rng(seed, 8)
    log: list[dict] = []
    best_draw: dict[str, float] | None = None
    best_score = math.inf
    for t in range(trials):
        draw = {
            name: float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
            for name, (lo, hi) in sorted(space.items())
        }
        score = float(objective(draw))
        log.append({"trial": t, "draw": draw, "score": score})
        if score < best_score:
            best_score = score
            best_draw = dict(draw)
    assert best_draw is not None
    return best_draw, log


# --- persistence ------------------------------------------------------------


def save_checkpoint(
    path: str | os.PathLike,
    params: dict[str, np.ndarray],
    cfg: ModelConfig,
    ordering_cfg: OrderingConfig,
    history: list[dict],
    extra: dict | None = None,
) -> None:
    doc = {
        "format": CHECKPOINT_FORMAT,
        "model": asdict(cfg),
        "ordering": {
            "family": ordering_cfg.family.value,
            "seed": ordering_cfg.seed,
            "tie_break": ordering_cfg.tie_break.value,
        },
        "tensors": {
            k: {"shape": list(v.shape), "data": v.ravel().tolist()}
            for k, v in params.items()
        },
        "history": history,
        "extra": extra or {},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_checkpoint(path: str | os.PathLike):
    """Returns (params, model_cfg, ordering_cfg, history, extra)."""
    from .graph import OrderingFamily
    from .ordering import TieBreak

    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"checkpoint is not valid JSON ({exc.msg})") from exc
    if not isinstance(doc, dict) or doc.get("format") != CHECKPOINT_FORMAT:
        raise FormatError(f"not a {CHECKPOINT_FORMAT} file")
    try:
        cfg = ModelConfig(**doc["model"])
        ordering_cfg = OrderingConfig(
            family=OrderingFamily(doc["ordering"]["family"]),
            seed=int(doc["ordering"]["seed"]),
            tie_break=TieBreak(doc["ordering"]["tie_break"]),
        )
        params = {}
        for k, rec in doc["tensors"].items():
            arr = np.array(rec["data"], dtype=np.float64).reshape(rec["shape"])
            params[k] = arr
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed checkpoint field: {exc}") from exc
    return params, cfg, ordering_cfg, doc.get("history", []), doc.get("extra", {})
