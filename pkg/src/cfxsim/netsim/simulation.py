"""Seeded discrete-event simulation of block production and propagation.

Every node shares one global ledger. A node's local view at time ``now`` is
the set of blocks whose arrival time at that node is ``<= now``; arrival
times are closed under the past (a block never arrives before any block it
points to), so every view is causally consistent.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from ..treegraph import Block, RewardParams, TreeGraph, block_reward_drip, genesis
from .config import AttackerConfig, SimConfig, SimResult
from .strategy import HONEST, MiningStrategy

log = logging.getLogger(__name__)

ATTACKER = 0
_MATURITY_CHECK_EVERY = 50


class Ledger:
    """Global block store with arrival times per node.

    Block ids are creation slots: genesis is 0, the k-th created block is k.
    """

    def __init__(self, num_nodes: int, capacity: int):
        self.num_nodes = num_nodes
        self.arrival = np.zeros((capacity, num_nodes))
        self.max_arrival = [0.0]
        self.release = [0.0]
        self.born = [0.0]
        self.miner = [0]
        self.parent = [-1]
        self.refs: list[tuple] = [()]
        self.succ: list[list[int]] = [[]]
        self.children: list[list[int]] = [[]]
        self.desc = [1]  # parent-subtree bitsets
        self.size = [1]
        self.heavy = [-1]  # heaviest child, ties to smaller id
        self.second = [0]  # largest subtree size among the other children
        self.tips = {0}
        self.pending: list[int] = []  # blocks not yet at every node

    def __len__(self) -> int:
        return len(self.parent)

    def view_missing(self, node: int, now: float) -> set[int]:
        """Created blocks not yet delivered to ``node``."""
        self.pending = [b for b in self.pending if self.max_arrival[b] > now]
        if not self.pending:
            return set()
        idx = np.fromiter(self.pending, dtype=np.intp, count=len(self.pending))
        late = idx[self.arrival[idx, node] > now]
        return set(late.tolist())

    def view_tips(self, missing: set[int]) -> list[int]:
        tips = {t for t in self.tips if t not in missing}
        for m in missing:
            for p in self._preds(m):
                if p not in missing and all(s in missing for s in self.succ[p]):
                    tips.add(p)
        return sorted(tips)

    def local_pivot_tip(self, missing: set[int]) -> int:
        """Heaviest-subtree descent restricted to the view; ties to smaller id."""
        miss_mask = 0
        for m in missing:
            miss_mask |= 1 << m
        slack = len(missing)
        cur = 0
        children, size, desc = self.children, self.size, self.desc
        heavy, second = self.heavy, self.second
        while True:
            kids = [c for c in children[cur] if c not in missing]
            if not kids:
                return cur
            if len(kids) == 1:
                cur = kids[0]
                continue
            h = heavy[cur]
            if h not in missing and size[h] - second[cur] > slack:
                cur = h  # missing blocks cannot overturn this lead
                continue
            best, best_w = -1, -1
            for c in kids:  # ascending ids, so strict > keeps the smaller on ties
                w = size[c] - (desc[c] & miss_mask).bit_count()
                if w > best_w:
                    best, best_w = c, w
            cur = best

    def _preds(self, b: int):
        if self.parent[b] >= 0:
            yield self.parent[b]
        yield from self.refs[b]

    def add(self, miner, now, release, parent, refs, delays) -> int:
        b = len(self.parent)
        self.parent.append(parent)
        self.refs.append(tuple(refs))
        self.succ.append([])
        self.children.append([])
        self.desc.append(1 << b)
        self.size.append(1)
        self.heavy.append(-1)
        self.second.append(0)
        self.born.append(now)
        self.miner.append(miner)
        self.release.append(release)
        row = release + delays
        row[miner] = now
        for p in self._preds(b):
            self.succ[p].append(b)
            self.tips.discard(p)
            np.maximum(row, self.arrival[p], out=row)
        self.tips.add(b)
        self.children[parent].append(b)
        bit, c = 1 << b, b
        size, heavy, second = self.size, self.heavy, self.second
        while c > 0:
            par = self.parent[c]
            h = heavy[par]
            if h < 0:
                heavy[par] = c
            elif h != c:
                if size[c] > size[h] or (size[c] == size[h] and c < h):
                    heavy[par] = c
                    second[par] = size[h]
                elif size[c] > second[par]:
                    second[par] = size[c]
            self.desc[par] |= bit
            size[par] += 1
            c = par
        self.arrival[b] = row
        mx = float(row.max())
        self.max_arrival.append(mx)
        if mx > now:
            self.pending.append(b)
        return b

    def to_graph(self, released_by: float = math.inf, horizon: int = 10) -> TreeGraph:
        """TreeGraph of every block broadcast no later than ``released_by``."""
        g = TreeGraph([genesis()], anticone_horizon=horizon)
        for b in range(1, len(self.parent)):
            if self.release[b] <= released_by:
                g.insert(
                    Block(b, self.parent[b], frozenset(self.refs[b]), self.miner[b], self.born[b])
                )
        return g


class _Run:
    def __init__(self, cfg: SimConfig, attacker_strategy: Optional[MiningStrategy]):
        self.cfg = cfg
        self.attacker_strategy = attacker_strategy
        ss = np.random.SeedSequence(cfg.seed)
        mining_seq, delay_seq = ss.spawn(2)
        self.mining_rng = np.random.default_rng(mining_seq)
        self.delay_rng = np.random.default_rng(delay_seq)
        self.ledger = Ledger(cfg.num_nodes, cfg.total_blocks + cfg.tail_limit + 1)
        self.now = 0.0

    def _next_event(self):
        cfg = self.cfg
        self.now += self.mining_rng.exponential(1.0 / cfg.block_rate)
        u = self.mining_rng.random()
        if cfg.attacker is None:
            miner = int(u * cfg.num_nodes) % cfg.num_nodes
        elif u < cfg.attacker.power:
            miner = ATTACKER
        else:
            frac = (u - cfg.attacker.power) / (1.0 - cfg.attacker.power)
            miner = 1 + int(frac * (cfg.num_nodes - 1)) % (cfg.num_nodes - 1)
        n = cfg.num_nodes
        if cfg.mean_delay_s == 0:
            delays = np.zeros(n)
        elif cfg.delay_model == "constant":
            delays = np.full(n, cfg.mean_delay_s)
        else:
            delays = self.delay_rng.exponential(cfg.mean_delay_s, n)
        if cfg.attacker is not None and cfg.attacker.instant_network:
            if miner == ATTACKER:
                delays[:] = 0.0
            else:
                delays[ATTACKER] = 0.0
        return miner, delays

    def step(self) -> int:
        miner, delays = self._next_event()
        now = self.now
        strategy = HONEST
        if miner == ATTACKER and self.attacker_strategy is not None:
            strategy = self.attacker_strategy
        led = self.ledger
        missing = led.view_missing(miner, now)
        parent = strategy.choose_parent(led, miner, now, missing)
        refs = [t for t in led.view_tips(missing) if t != parent]
        b = led.add(miner, now, strategy.release_time(now), parent, refs, delays)
        strategy.on_created(b, now)
        return b

    def run(self):
        cfg = self.cfg
        for _ in range(cfg.total_blocks):
            self.step()
        measured = range(cfg.warmup_blocks + 1, cfg.total_blocks + 1)
        led = self.ledger
        last_release = max(
            (led.release[b] for b in measured if math.isfinite(led.release[b])), default=0.0
        )
        extra = 0
        while True:
            ready = self.now >= last_release
            if ready and (extra % _MATURITY_CHECK_EVERY == 0 or extra >= cfg.tail_limit):
                g = led.to_graph(self.now, cfg.horizon_epochs)
                immature = [b for b in measured if b in g and not g.is_mature(b)]
                if not immature or extra >= cfg.tail_limit:
                    return g, measured, immature
            self.step()
            extra += 1


def _simulate(cfg: SimConfig, attacker_strategy: Optional[MiningStrategy]):
    run = _Run(cfg, attacker_strategy)
    g, measured, immature = run.run()
    params = RewardParams(cfg.base_reward, 100, cfg.horizon_epochs)
    per_miner: dict[int, int] = {}
    for b in measured:
        if b not in g:
            continue  # never broadcast
        reward = block_reward_drip(params, g.anticone_size(b)) if g.epoch_of(b) is not None else 0
        m = run.ledger.miner[b]
        per_miner[m] = per_miner.get(m, 0) + reward
    if immature:
        log.warning("%d measured blocks still immature after tail", len(immature))
    attacker_blocks = sum(1 for b in measured if run.ledger.miner[b] == ATTACKER)
    return per_miner, g, len(measured), attacker_blocks, len(immature)


_BASELINE_CACHE: dict = {}


def _baseline_key(cfg: SimConfig) -> SimConfig:
    return replace(cfg, attacker=replace(cfg.attacker, withhold_s=0.0))


def honest_reward_baseline(cfg: SimConfig) -> int:
    """Reward node 0 earns in the same seeded scenario when it mines honestly."""
    if cfg.attacker is None:
        raise ValueError("honest_reward_baseline needs an attacker configuration")
    cfg.check()
    key = _baseline_key(cfg)
    if key not in _BASELINE_CACHE:
        if len(_BASELINE_CACHE) > 256:
            _BASELINE_CACHE.clear()
        per_miner = _simulate(key, None)[0]
        _BASELINE_CACHE[key] = per_miner.get(ATTACKER, 0)
    return _BASELINE_CACHE[key]


def run_simulation(cfg: SimConfig) -> SimResult:
    cfg.check()
    strategy = None
    if cfg.attacker is not None:
        from ..attack.withholding import WithholdingStrategy

        strategy = WithholdingStrategy(cfg.attacker.withhold_s)
    per_miner, g, n_measured, n_attacker, n_immature = _simulate(cfg, strategy)
    res = SimResult(
        config=cfg,
        per_miner_reward=per_miner,
        blocks_measured=n_measured,
        attacker_blocks=n_attacker,
        immature_blocks=n_immature,
        graph=g,
    )
    if cfg.attacker is not None:
        res.attacker_reward = per_miner.get(ATTACKER, 0)
        res.baseline_reward = honest_reward_baseline(cfg)
        if res.baseline_reward > 0:
            res.attacker_reward_ratio = res.attacker_reward / res.baseline_reward
        elif res.attacker_reward == 0:
            res.attacker_reward_ratio = 1.0
        else:
            res.attacker_reward_ratio = math.inf
    return res


class SweepError(RuntimeError):
    def __init__(self, failures: dict, results: list):
        self.failures = failures
        self.results = results
        msg = ", ".join(f"[{i}] {e}" for i, e in sorted(failures.items()))
        super().__init__(f"{len(failures)} sweep run(s) failed: {msg}")


def sweep(cfgs: Sequence[SimConfig], workers: int = 1) -> list[SimResult]:
    """Run independent scenarios; results keep input order.

    Failed runs are collected and raised together as a ``SweepError`` that
    maps input index to exception.
    """
    cfgs = list(cfgs)

    def one(cfg):
        try:
            return run_simulation(cfg)
        except Exception as exc:  # noqa: BLE001 - reported per index
            return exc

    if workers > 1 and len(cfgs) > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, cfgs))
    else:
        results = [one(c) for c in cfgs]
    failures = {i: r for i, r in enumerate(results) if isinstance(r, Exception)}
    if failures:
        raise SweepError(failures, results)
    return results


def attacker_config(power: float, withhold_s: float, instant_network: bool = True) -> AttackerConfig:
    return AttackerConfig(power, withhold_s, instant_network)
