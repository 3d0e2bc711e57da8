"""Training engine: match/correct sets, covering, steady-state GA,
subsumption, crispification, deletion, and class inference.

The population is stored as flat numpy arrays (one row per macro-rule) so
that matching-degree evaluation, the hot path of the whole system, is a
handful of vectorized operations per training iteration.  Per-row caches
(crisp mask, mode, kurtosis, log peak density) are refreshed whenever an
operator touches a rule's condition.

Because the membership function is the density normalized by its modal
value, the beta function cancels out of every matching-degree computation;
crisp rules reduce to interval tests and fuzzy rules to a log-kernel
difference.  Nothing in this module evaluates a special function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .beta_math import Beta4Params, kurtosis
from .rules import Rule, TriangleSet, make_rule

REP_FBR = "fbr"
REP_RECT = "rect"
REP_TRI = "tri"

_TINY = 1e-300


@dataclass
class EngineConfig:
    """All system hyperparameters plus representation choices.

    Defaults reproduce the standard setup: N=2000, F0=0.99, nu=1,
    chi=0.8, p_mut=0.04, delta=0.01, theta_* thresholds of 50/50/50/10,
    tau=0.4, P_#=0.33, both subsumption flavors on, r0=1.0, m0=0.1,
    Tol_sub=0.01, s0=1.0.
    """

    n_max: int = 2000
    f0: float = 0.99
    nu: float = 1.0
    chi: float = 0.8
    p_mut: float = 0.04
    delta: float = 0.01
    theta_ga: float = 50.0
    theta_del: float = 50.0
    theta_sub: float = 50.0
    theta_exp: float = 10.0
    tau: float = 0.4
    p_hash: float = 0.33
    do_cs_subsumption: bool = True
    do_ga_subsumption: bool = True
    r0: float = 1.0
    m0: float = 0.1
    tol_sub: float = 0.01
    s0: float = 1.0
    crispification: bool = True
    representation: str = REP_FBR
    epochs: int = 50

    def __post_init__(self):
        if self.representation not in (REP_FBR, REP_RECT, REP_TRI):
            raise ValueError(f"unknown representation {self.representation!r}")
        if self.n_max < 1 or self.epochs < 1:
            raise ValueError("n_max and epochs must be >= 1")
        for name in ("chi", "p_mut", "p_hash"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be a probability")
        for name in ("theta_ga", "theta_del", "theta_sub", "theta_exp"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.r0 <= 0.0:
            raise ValueError("r0 must be positive")
        if self.s0 < 1.0:
            raise ValueError("s0 must be >= 1")


def is_more_general(sub: Rule, tos: Rule, tol_sub: float) -> bool:
    """Whether ``sub``'s condition generalizes ``tos``'s, dimension-wise.

    Requires, per dimension: the clipped-to-[0,1] interval of ``sub``
    contains that of ``tos``; ``sub``'s kurtosis does not exceed
    ``tos``'s; and, when neither set is rectangular in that dimension,
    the modes differ by at most ``tol_sub``.
    """
    if len(sub.condition) != len(tos.condition):
        raise ValueError("rule dimensionalities differ")
    for fs, ft in zip(sub.condition, tos.condition):
        if not (isinstance(fs, Beta4Params) and isinstance(ft, Beta4Params)):
            raise ValueError("is_more_general requires beta-shaped conditions")
        if max(0.0, fs.lower) > max(0.0, ft.lower):
            return False
        if min(1.0, ft.upper) > min(1.0, fs.upper):
            return False
        if kurtosis(fs.alpha, fs.beta) > kurtosis(ft.alpha, ft.beta):
            return False
        if not fs.is_rectangular and not ft.is_rectangular:
            from .beta_math import mode
            if abs(mode(fs) - mode(ft)) > tol_sub:
                return False
    return True


class Beta4UCS:
    """One trainable population plus the full run cycle.

    Single-threaded by design: one instance owns one population.  All
    randomness flows through the ``numpy.random.Generator`` handed to the
    constructor, so equal seeds give bit-identical runs.
    """

    def __init__(self, config: EngineConfig, n_dims: int, n_classes: int,
                 rng: np.random.Generator):
        if n_dims < 1 or n_classes < 2:
            raise ValueError("need at least 1 dimension and 2 classes")
        self.cfg = config
        self.n_dims = n_dims
        self.n_classes = n_classes
        self.rng = rng
        self.t = 0
        self.fallback_class = 0
        self._beta_rep = config.representation in (REP_FBR, REP_RECT)

        cap = 256
        d, m = n_dims, n_classes
        if self._beta_rep:
            self.sa = np.ones((cap, d))
            self.sb = np.ones((cap, d))
            self.lo = np.zeros((cap, d))
            self.up = np.ones((cap, d))
            self.crisp = np.ones((cap, d), dtype=bool)
            self.mode_ = np.zeros((cap, d))
            self.kurt = np.full((cap, d), 1.8)
            self.logpk = np.zeros((cap, d))
            self.fuzzy_any = np.zeros(cap, dtype=bool)
        else:
            self.va = np.zeros((cap, d))
            self.vb = np.zeros((cap, d))
            self.vc = np.zeros((cap, d))
        self.cm = np.zeros((cap, m))
        self.exp_ = np.zeros(cap)
        self.fit = np.zeros(cap)
        self.num = np.zeros(cap, dtype=np.int64)
        self.cs = np.ones(cap)
        self.ga_ts = np.zeros(cap, dtype=np.int64)
        self.cls = np.zeros(cap, dtype=np.int64)
        self.active = np.zeros(cap, dtype=bool)
        self.born = np.zeros(cap, dtype=np.int64)

        self._cap = cap
        self._top = 0
        self._free: list[int] = []
        self._born_counter = 0
        self.n_macro = 0
        self.n_micro = 0

    # ----- storage ----------------------------------------------------

    def _grow(self):
        new_cap = self._cap * 2
        for name in ("sa", "sb", "lo", "up", "crisp", "mode_", "kurt",
                     "logpk", "fuzzy_any", "va", "vb", "vc", "cm", "exp_",
                     "fit", "num", "cs", "ga_ts", "cls", "active", "born"):
            arr = getattr(self, name, None)
            if arr is None:
                continue
            shape = (new_cap,) + arr.shape[1:]
            new = np.zeros(shape, dtype=arr.dtype)
            new[: self._cap] = arr
            setattr(self, name, new)
        self._cap = new_cap

    def _alloc(self) -> int:
        if self._free:
            return self._free.pop()
        if self._top == self._cap:
            self._grow()
        row = self._top
        self._top += 1
        return row

    def _release(self, row: int):
        self.active[row] = False
        self.num[row] = 0
        self._free.append(row)

    def _refresh_row(self, row: int):
        """Recompute per-dimension caches after a condition change."""
        a = self.sa[row]
        b = self.sb[row]
        lo = self.lo[row]
        up = self.up[row]
        crisp = (a == 1.0) & (b == 1.0)
        self.crisp[row] = crisp
        self.fuzzy_any[row] = not crisp.all()
        s = a + b
        self.kurt[row] = (3.0 * (s + 1.0) * (2.0 * s * s + a * b * (s - 6.0))
                          / (a * b * (s + 2.0) * (s + 3.0)))
        excess = (a - 1.0) + (b - 1.0)
        mode = np.where(crisp, 0.5 * (lo + up),
                        lo + (a - 1.0) / np.where(crisp, 1.0, excess) * (up - lo))
        self.mode_[row] = np.clip(mode, lo, up)
        am1 = a - 1.0
        bm1 = b - 1.0
        lg = np.where(am1 > 0.0, am1 * np.log(np.maximum(mode - lo, _TINY)), 0.0)
        lg += np.where(bm1 > 0.0, bm1 * np.log(np.maximum(up - mode, _TINY)), 0.0)
        self.logpk[row] = np.where(crisp, 0.0, lg)

    # ----- matching ---------------------------------------------------

    def match_degrees(self, x: np.ndarray, miss: np.ndarray | None = None) -> np.ndarray:
        """Matching degree of every stored row for input ``x``.

        ``miss`` marks missing attributes; those dimensions contribute 1.
        Returns an array over the row watermark with inactive rows at 0.
        """
        top = self._top
        if top == 0:
            return np.zeros(0)
        if self._beta_rep:
            mu = self._match_beta(x, miss, top)
        else:
            mu = self._match_tri(x, miss, top)
        mu[~self.active[:top]] = 0.0
        return mu

    def _match_beta(self, x, miss, top):
        t1 = x - self.lo[:top]
        t2 = self.up[:top] - x
        inside = (t1 >= 0.0) & (t2 >= 0.0)
        if miss is not None:
            inside[:, miss] = True
        mu = inside.all(axis=1).astype(float)
        fz = np.flatnonzero(self.fuzzy_any[:top] & (mu > 0.0))
        if fz.size:
            am1 = self.sa[fz] - 1.0
            bm1 = self.sb[fz] - 1.0
            # rows here are inside their intervals, so the kernel terms are
            # >= 0 and log yields -inf exactly at an endpoint
            with np.errstate(divide="ignore", invalid="ignore"):
                la = np.log(x - self.lo[fz])
                lb = np.log(self.up[fz] - x)
                lg = np.where(am1 > 0.0, am1 * la, 0.0)
                lg += np.where(bm1 > 0.0, bm1 * lb, 0.0)
            lg -= self.logpk[fz]
            if miss is not None:
                lg[:, miss] = 0.0
            mu[fz] = np.exp(lg.sum(axis=1))
        return mu

    def _match_tri(self, x, miss, top):
        va = self.va[:top]
        vb = self.vb[:top]
        vc = self.vc[:top]
        # Rising ramp left of the peak, falling ramp right of it; both go
        # negative outside the support, so one clamp at 0 covers all cases.
        mem = np.where(x <= vb, (x - va) / (vb - va), (vc - x) / (vc - vb))
        mem = np.maximum(mem, 0.0)
        if miss is not None:
            mem[:, miss] = 1.0
        return mem.prod(axis=1)

    def build_match_set(self, x: np.ndarray, miss: np.ndarray | None = None):
        """Row indices with strictly positive matching degree, plus degrees."""
        mu = self.match_degrees(x, miss)
        rows = np.flatnonzero(mu > 0.0)
        return rows, mu

    # ----- covering ---------------------------------------------------

    def covering(self, x: np.ndarray, correct_class: int,
                 miss: np.ndarray | None = None) -> int:
        """Create a covering rule centered on ``x`` and insert it.

        Returns the row index the rule ended up in (a pre-existing row if
        an identical rule was already stored).
        """
        cfg = self.cfg
        rng = self.rng
        d = self.n_dims
        row = self._alloc()
        if self._beta_rep:
            # U(0, r0]: 1 - random() is in (0, 1].
            dd = (1.0 - rng.random(d)) * cfg.r0
            if cfg.representation == REP_FBR and cfg.s0 > 1.0:
                shape = rng.uniform(1.0, cfg.s0, d)
            else:
                shape = np.ones(d)
            dont_care = rng.random(d) < cfg.p_hash
            if miss is not None:
                dont_care = dont_care | miss
            self.sa[row] = np.where(dont_care, 1.0, shape)
            self.sb[row] = np.where(dont_care, 1.0, shape)
            self.lo[row] = np.where(dont_care, 0.0, x - dd)
            self.up[row] = np.where(dont_care, 1.0, x + dd)
            self._refresh_row(row)
        else:
            xs = np.where(miss, 0.5, x) if miss is not None else x
            self.va[row] = -0.5 + (xs + 0.5) * rng.random(d)
            self.vb[row] = xs
            self.vc[row] = xs + (1.5 - xs) * np.maximum(1.0 - rng.random(d), 1e-12)
        self.cm[row] = 0.0
        self.exp_[row] = 0.0
        self.fit[row] = 0.0
        self.num[row] = 1
        self.cs[row] = 1.0
        self.ga_ts[row] = self.t
        self.cls[row] = correct_class
        return self._insert(row)

    def _condition_equal(self, row: int, other: int) -> bool:
        if self._beta_rep:
            return (np.array_equal(self.sa[row], self.sa[other])
                    and np.array_equal(self.sb[row], self.sb[other])
                    and np.array_equal(self.lo[row], self.lo[other])
                    and np.array_equal(self.up[row], self.up[other]))
        return (np.array_equal(self.va[row], self.va[other])
                and np.array_equal(self.vb[row], self.vb[other])
                and np.array_equal(self.vc[row], self.vc[other]))

    def _insert(self, row: int) -> int:
        """Insert an allocated row, merging with an identical macro-rule."""
        top = self._top
        act = np.flatnonzero(self.active[:top] & (self.cls[:top] == self.cls[row]))
        if act.size:
            # Cheap prefilter: conditions are continuous draws, so the first
            # dimension alone rejects almost every non-duplicate row.
            first = self.lo if self._beta_rep else self.va
            act = act[first[act, 0] == first[row, 0]]
        if act.size and self._beta_rep:
            cand = act[(np.abs(self.lo[act] - self.lo[row]).max(axis=1) == 0.0)
                       & (np.abs(self.up[act] - self.up[row]).max(axis=1) == 0.0)
                       & (np.abs(self.sa[act] - self.sa[row]).max(axis=1) == 0.0)
                       & (np.abs(self.sb[act] - self.sb[row]).max(axis=1) == 0.0)]
        elif act.size:
            cand = act[(np.abs(self.va[act] - self.va[row]).max(axis=1) == 0.0)
                       & (np.abs(self.vb[act] - self.vb[row]).max(axis=1) == 0.0)
                       & (np.abs(self.vc[act] - self.vc[row]).max(axis=1) == 0.0)]
        else:
            cand = act
        if cand.size:
            target = int(cand[0])
            self.num[target] += 1
            self.n_micro += 1
            self._release(row)
            return target
        self.active[row] = True
        self.born[row] = self._born_counter
        self._born_counter += 1
        self.n_macro += 1
        self.n_micro += int(self.num[row])
        return row

    # ----- deletion ---------------------------------------------------

    def delete_to_capacity(self) -> list[int]:
        """Roulette-delete micro-rules until the population fits N.

        Returns the rows whose macro-rules were removed entirely.
        """
        cfg = self.cfg
        removed = []
        while self.n_micro > cfg.n_max:
            act = np.flatnonzero(self.active[: self._top])
            fit_avg = float((self.fit[act] * self.num[act]).sum()) / self.n_micro
            votes = self.cs[act] * self.num[act]
            low = (self.exp_[act] > cfg.theta_del) & (self.fit[act] < cfg.delta * fit_avg)
            if low.any():
                # Amplify deletion pressure on experienced low-fitness rules.
                # Both sides are clamped so the ratio stays >= 0 even when the
                # population average fitness is negative (possible with many
                # classes, where over-general rules score below zero).
                amp = max(fit_avg, 1e-3) / np.maximum(self.fit[act], 1e-3)
                votes = np.where(low, votes * amp, votes)
            votes = np.maximum(votes, 0.0)
            total = votes.sum()
            if total <= 0.0:
                victim = act[int(self.rng.integers(act.size))]
            else:
                r = self.rng.random() * total
                victim = act[min(int(np.searchsorted(np.cumsum(votes), r, side="right")),
                                 act.size - 1)]
            self.num[victim] -= 1
            self.n_micro -= 1
            if self.num[victim] == 0:
                self.n_macro -= 1
                removed.append(int(victim))
                self._release(victim)
        return removed

    # ----- subsumption ------------------------------------------------

    def _more_general_than_rows(self, sub: int, rows: np.ndarray) -> np.ndarray:
        cfg = self.cfg
        lo_s = np.maximum(self.lo[sub], 0.0)
        up_s = np.minimum(self.up[sub], 1.0)
        c = (np.maximum(self.lo[rows], 0.0) >= lo_s)
        c &= (np.minimum(self.up[rows], 1.0) <= up_s)
        c &= (self.kurt[rows] >= self.kurt[sub])
        need3 = (~self.crisp[sub]) & (~self.crisp[rows])
        c3 = np.abs(self.mode_[rows] - self.mode_[sub]) <= cfg.tol_sub
        c &= c3 | ~need3
        return c.all(axis=1)

    def correct_set_subsumption(self, correct: np.ndarray) -> np.ndarray:
        """Let the most general eligible rule in [C] absorb its specializations.

        Returns the surviving correct set.
        """
        cfg = self.cfg
        elig = correct[(self.exp_[correct] > cfg.theta_sub)
                       & (self.fit[correct] > cfg.f0)]
        if elig.size == 0 or correct.size < 2:
            return correct
        best_row = -1
        best_key = None
        best_mask = None
        for sub in elig:
            mask = self._more_general_than_rows(int(sub), correct)
            count = int(mask.sum()) - 1  # ignore reflexive self-match
            key = (count, int(self.num[sub]), -int(self.born[sub]))
            if count > 0 and (best_key is None or key > best_key):
                best_key = key
                best_row = int(sub)
                best_mask = mask
        if best_row < 0:
            return correct
        victims = correct[best_mask & (correct != best_row)]
        if victims.size == 0:
            return correct
        self.num[best_row] += int(self.num[victims].sum())
        for v in victims:
            self.n_macro -= 1
            self._release(int(v))
        return correct[~(best_mask & (correct != best_row))]

    # ----- crispification ---------------------------------------------

    def crispify(self, correct: np.ndarray):
        """Force one random fuzzy dimension of each well-performing rule
        in [C] to the rectangular shape and reset its statistics."""
        cfg = self.cfg
        elig = correct[(self.exp_[correct] > cfg.theta_sub)
                       & (self.fit[correct] > cfg.f0)
                       & self.fuzzy_any[correct]]
        for row in elig:
            row = int(row)
            nonrect = np.flatnonzero(~self.crisp[row])
            j = nonrect[int(self.rng.integers(nonrect.size))]
            self.sa[row, j] = 1.0
            self.sb[row, j] = 1.0
            self.exp_[row] = 0.0
            self.cm[row] = 0.0
            self.fit[row] = 0.0
            self._refresh_row(row)

    # ----- genetic algorithm ------------------------------------------

    def _tournament(self, correct: np.ndarray, mu: np.ndarray) -> int:
        size = math.ceil(self.cfg.tau * correct.size)
        pool = self.rng.choice(correct, size=size, replace=False) if size < correct.size \
            else correct
        score = mu[pool] * self.fit[pool]
        return int(pool[int(np.argmax(score))])

    def _mutate_condition(self, cond: dict):
        cfg = self.cfg
        rng = self.rng
        d = self.n_dims
        hit = rng.random(d) < cfg.p_mut
        if not hit.any():
            return
        if self._beta_rep:
            if cfg.representation == REP_FBR:
                cond["sa"] = np.where(hit, cond["sa"] * (1.0 + rng.uniform(-0.5, 0.5, d)),
                                      cond["sa"])
                cond["sb"] = np.where(hit, cond["sb"] * (1.0 + rng.uniform(-0.5, 0.5, d)),
                                      cond["sb"])
                np.maximum(cond["sa"], 1.0, out=cond["sa"])
                np.maximum(cond["sb"], 1.0, out=cond["sb"])
            lo = np.where(hit, cond["lo"] + rng.uniform(-cfg.m0, cfg.m0, d), cond["lo"])
            up = np.where(hit, cond["up"] + rng.uniform(-cfg.m0, cfg.m0, d), cond["up"])
            swap = lo > up
            lo2 = np.where(swap, up, lo)
            up2 = np.where(swap, lo, up)
            up2 = np.where(up2 == lo2, up2 + 1e-6, up2)
            cond["lo"] = lo2
            cond["up"] = up2
        else:
            verts = np.stack([cond["va"], cond["vb"], cond["vc"]])
            verts = np.where(hit, verts + rng.uniform(-cfg.m0, cfg.m0, (3, d)), verts)
            verts = np.sort(verts, axis=0)
            # restore strict ordering after possible collisions
            verts[1] = np.where(verts[1] <= verts[0], verts[0] + 1e-9, verts[1])
            verts[2] = np.where(verts[2] <= verts[1], verts[1] + 1e-9, verts[2])
            cond["va"], cond["vb"], cond["vc"] = verts

    def _extract_condition(self, row: int) -> dict:
        if self._beta_rep:
            return {"sa": self.sa[row].copy(), "sb": self.sb[row].copy(),
                    "lo": self.lo[row].copy(), "up": self.up[row].copy()}
        return {"va": self.va[row].copy(), "vb": self.vb[row].copy(),
                "vc": self.vc[row].copy()}

    def _offspring_more_specific_than(self, parent: int, cond: dict) -> bool:
        cfg = self.cfg
        lo_p = np.maximum(self.lo[parent], 0.0)
        up_p = np.minimum(self.up[parent], 1.0)
        if (np.maximum(cond["lo"], 0.0) < lo_p).any():
            return False
        if (np.minimum(cond["up"], 1.0) > up_p).any():
            return False
        a = cond["sa"]
        b = cond["sb"]
        s = a + b
        kurt_o = (3.0 * (s + 1.0) * (2.0 * s * s + a * b * (s - 6.0))
                  / (a * b * (s + 2.0) * (s + 3.0)))
        if (kurt_o < self.kurt[parent]).any():
            return False
        crisp_o = (a == 1.0) & (b == 1.0)
        need3 = (~self.crisp[parent]) & (~crisp_o)
        if need3.any():
            excess = (a - 1.0) + (b - 1.0)
            mode_o = np.where(crisp_o, 0.5 * (cond["lo"] + cond["up"]),
                              cond["lo"] + (a - 1.0)
                              / np.where(crisp_o, 1.0, excess)
                              * (cond["up"] - cond["lo"]))
            mode_o = np.clip(mode_o, cond["lo"], cond["up"])
            if (need3 & (np.abs(mode_o - self.mode_[parent]) > cfg.tol_sub)).any():
                return False
        return True

    def run_ga(self, correct: np.ndarray, mu: np.ndarray):
        """Steady-state GA on [C]: tournament parents, uniform crossover,
        relative mutation, optional GA subsumption, then deletion."""
        cfg = self.cfg
        rng = self.rng
        p1 = self._tournament(correct, mu)
        p2 = self._tournament(correct, mu)
        self.ga_ts[correct] = self.t
        off = [self._extract_condition(p1), self._extract_condition(p2)]
        parents = [p1, p2]
        if rng.random() < cfg.chi:
            swap = rng.random(self.n_dims) < 0.5
            for key in off[0]:
                a = off[0][key]
                b = off[1][key]
                a2 = np.where(swap, b, a)
                b2 = np.where(swap, a, b)
                off[0][key] = a2
                off[1][key] = b2
        for cond in off:
            self._mutate_condition(cond)
        cs_init = 0.5 * (self.cs[p1] + self.cs[p2])
        for i, cond in enumerate(off):
            child_cls = int(self.cls[parents[i]])
            if cfg.do_ga_subsumption and self._beta_rep:
                recipient = -1
                for par in parents:
                    if (self.active[par] and self.exp_[par] > cfg.theta_sub
                            and self.fit[par] > cfg.f0
                            and self._offspring_more_specific_than(par, cond)):
                        recipient = par
                        break
                if recipient >= 0:
                    self.num[recipient] += 1
                    self.n_micro += 1
                    self.delete_to_capacity()
                    continue
            row = self._alloc()
            if self._beta_rep:
                self.sa[row] = cond["sa"]
                self.sb[row] = cond["sb"]
                self.lo[row] = cond["lo"]
                self.up[row] = cond["up"]
                self._refresh_row(row)
            else:
                self.va[row] = cond["va"]
                self.vb[row] = cond["vb"]
                self.vc[row] = cond["vc"]
            self.cm[row] = 0.0
            self.exp_[row] = 0.0
            self.fit[row] = 0.0
            self.num[row] = 1
            self.cs[row] = cs_init
            self.ga_ts[row] = self.t
            self.cls[row] = child_cls
            self._insert(row)
            self.delete_to_capacity()

    # ----- inference --------------------------------------------------

    def _vote(self, mu: np.ndarray) -> np.ndarray:
        top = self._top
        rows = np.flatnonzero((mu > 0.0) & (self.exp_[:top] > self.cfg.theta_exp))
        scores = np.full(self.n_classes, -np.inf)
        if rows.size == 0:
            return scores
        weights = self.fit[rows] * mu[rows] * self.num[rows]
        present = np.bincount(self.cls[rows], minlength=self.n_classes) > 0
        raw = np.bincount(self.cls[rows], weights=weights, minlength=self.n_classes)
        scores[present] = raw[present]
        return scores

    def infer(self, x: np.ndarray, miss: np.ndarray | None = None) -> int:
        """Class vote over experienced matching rules; ties go to the
        smallest class index, an empty vote to the training majority."""
        mu = self.match_degrees(x, miss)
        scores = self._vote(mu)
        if not np.isfinite(scores).any():
            return self.fallback_class
        return int(np.argmax(scores))

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.empty(len(X), dtype=np.int64)
        has_nan = np.isnan(X).any()
        for i, x in enumerate(X):
            miss = np.isnan(x) if has_nan else None
            if miss is not None and not miss.any():
                miss = None
            out[i] = self.infer(x, miss)
        return out

    # ----- training ---------------------------------------------------

    def train_iteration(self, x: np.ndarray, y: int,
                        miss: np.ndarray | None = None) -> bool:
        """One Algorithm-1 cycle.  Returns whether the pre-update vote
        would have classified ``x`` correctly (online accuracy)."""
        cfg = self.cfg
        self.t += 1
        mu = self.match_degrees(x, miss)
        scores = self._vote(mu)
        if np.isfinite(scores).any():
            predicted = int(np.argmax(scores))
        else:
            predicted = self.fallback_class
        match = np.flatnonzero(mu > 0.0)
        correct = match[self.cls[match] == y]
        if mu[correct].sum() < 1.0:
            row = self.covering(x, y, miss)
            removed = self.delete_to_capacity()
            if removed:
                alive = self.active[match]
                match = match[alive]
            if self.active[row] and row not in match:
                match = np.append(match, row)
                if mu.shape[0] <= row:
                    mu = np.concatenate([mu, np.zeros(self._top - mu.shape[0])])
                mu[row] = 1.0
            correct = match[self.cls[match] == y]

        if match.size:
            mum = mu[match]
            self.exp_[match] += mum
            self.cm[match, y] += mum
            cmm = self.cm[match]
            best = cmm.max(axis=1)
            self.cls[match] = np.argmax(cmm, axis=1)
            raw = (2.0 * best - cmm.sum(axis=1)) / self.exp_[match]
            if cfg.nu != 1.0:
                raw = np.copysign(np.abs(raw) ** cfg.nu, raw)
            self.fit[match] = raw
            if correct.size:
                num_sum = float(self.num[correct].sum())
                self.cs[correct] += (mu[correct] / self.exp_[correct]
                                     * (num_sum - self.cs[correct]))
            # consequents may have switched; rebuild [C] for the operators below
            correct = match[(self.cls[match] == y) & self.active[match]]

        if cfg.do_cs_subsumption and self._beta_rep and correct.size:
            correct = self.correct_set_subsumption(correct)
        if cfg.crispification and cfg.representation == REP_FBR and correct.size:
            self.crispify(correct)
        if correct.size:
            num_c = self.num[correct]
            ts_avg = float((self.ga_ts[correct] * num_c).sum()) / float(num_c.sum())
            if self.t - ts_avg > cfg.theta_ga:
                self.run_ga(correct, mu)
        return predicted == y

    def train(self, X: np.ndarray, y: np.ndarray, epochs: int | None = None):
        """Run ``epochs`` passes over the data in per-epoch random order.

        Returns the per-epoch trace: (epoch, online training accuracy,
        macro-rule count, micro-rule count, crisp-rule fraction).
        """
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.int64)
        if len(X) == 0:
            raise ValueError("cannot train on an empty dataset")
        epochs = self.cfg.epochs if epochs is None else epochs
        if epochs < 1:
            raise ValueError("epochs must be >= 1")
        self.fallback_class = int(np.bincount(y, minlength=self.n_classes).argmax())
        has_nan = np.isnan(X).any()
        trace = []
        n = len(X)
        for epoch in range(1, epochs + 1):
            order = self.rng.permutation(n)
            hits = 0
            for i in order:
                x = X[i]
                miss = None
                if has_nan:
                    m = np.isnan(x)
                    miss = m if m.any() else None
                hits += self.train_iteration(x, int(y[i]), miss)
            trace.append((epoch, hits / n, self.n_macro, self.n_micro,
                          self.crisp_fraction()))
        return trace

    # ----- introspection ----------------------------------------------

    def crisp_fraction(self) -> float:
        """Fraction of macro-rules that are rectangular in every dimension."""
        act = np.flatnonzero(self.active[: self._top])
        if act.size == 0:
            return 1.0 if self._beta_rep else 0.0
        if not self._beta_rep:
            return 0.0
        return float((~self.fuzzy_any[act]).sum()) / act.size

    def active_rows(self) -> np.ndarray:
        rows = np.flatnonzero(self.active[: self._top])
        return rows[np.argsort(self.born[rows], kind="stable")]

    def to_rules(self) -> list[Rule]:
        """Export the population as plain rule objects, insertion-ordered."""
        out = []
        for row in self.active_rows():
            row = int(row)
            if self._beta_rep:
                cond = tuple(Beta4Params(float(self.sa[row, i]), float(self.sb[row, i]),
                                         float(self.lo[row, i]), float(self.up[row, i]))
                             for i in range(self.n_dims))
            else:
                cond = tuple(TriangleSet(float(self.va[row, i]), float(self.vb[row, i]),
                                         float(self.vc[row, i]))
                             for i in range(self.n_dims))
            r = make_rule(cond, int(self.cls[row]), self.n_classes,
                          ga_ts=int(self.ga_ts[row]))
            r.cm = self.cm[row].copy()
            r.fitness = float(self.fit[row])
            r.exp = float(self.exp_[row])
            r.num = int(self.num[row])
            r.cs = float(self.cs[row])
            out.append(r)
        return out

    def load_rules(self, rules: list[Rule]):
        """Replace the population with previously exported rules."""
        for row in list(np.flatnonzero(self.active[: self._top])):
            self._release(int(row))
        self.n_macro = 0
        self.n_micro = 0
        for r in rules:
            row = self._alloc()
            if self._beta_rep:
                for i, fs in enumerate(r.condition):
                    self.sa[row, i] = fs.alpha
                    self.sb[row, i] = fs.beta
                    self.lo[row, i] = fs.lower
                    self.up[row, i] = fs.upper
                self._refresh_row(row)
            else:
                for i, fs in enumerate(r.condition):
                    self.va[row, i] = fs.a
                    self.vb[row, i] = fs.b
                    self.vc[row, i] = fs.c
            self.cm[row] = np.asarray(r.cm, dtype=float)
            self.exp_[row] = r.exp
            self.fit[row] = r.fitness
            self.num[row] = r.num
            self.cs[row] = r.cs
            self.ga_ts[row] = r.ga_ts
            self.cls[row] = r.consequent
            self.active[row] = True
            self.born[row] = self._born_counter
            self._born_counter += 1
            self.n_macro += 1
            self.n_micro += r.num
