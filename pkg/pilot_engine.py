"""Pilot: engine variants across seeds and benchmarks (throwaway script)."""
import sys, time
import numpy as np
import smoothgp as sg
from smoothgp import stackgp, surrogate
from smoothgp.stackgp import Instruction, Op, _OPERATORS

def decade_ranges(fn, values):
    lo_f, hi_f = float(np.min(values)), float(np.max(values))
    scale = max(abs(fn.lower), abs(fn.upper), abs(lo_f), abs(hi_f))
    ranges = [(fn.lower, fn.upper), (lo_f, hi_f)]
    s = scale
    for _ in range(7):
        ranges.append((-s, s))
        s /= 10.0
    return tuple(ranges)

def typed_mutate(prog, p_m, ranges, rng, jitter=False):
    code = list(prog.code)
    for i in np.flatnonzero(rng.random(len(code)) < p_m):
        op = code[i].op
        if op == Op.CONST:
            if jitter and rng.random() < 0.5:
                value = code[i].arg * (1.0 + 0.1 * rng.standard_normal())
                code[i] = Instruction(Op.CONST, float(value))
                continue
            lo, hi = ranges[int(rng.integers(len(ranges)))]
            code[i] = Instruction(Op.CONST, float(rng.uniform(lo, hi)))
        elif op == Op.VAR:
            code[i] = Instruction(Op.VAR, int(rng.integers(prog.dimension)))
        else:
            code[i] = _OPERATORS[int(rng.integers(6))]
    return stackgp.Program(prog.dimension, tuple(code), ranges)

def run(fn, seed, variant, generations=30, pop_size=50):
    master = np.random.SeedSequence(seed)
    s_seq, g_seq = master.spawn(2)
    sampled = fn.sample_uniform(100 * fn.dimension, np.random.default_rng(s_seq))
    rng = np.random.default_rng(g_seq)
    if "decade" in variant:
        ranges = stackgp._as_ranges(decade_ranges(fn, sampled[1]))
    else:
        ranges = stackgp._as_ranges(surrogate.default_const_range(fn, sampled[1]))
    typed = "typed" in variant
    cache = {}
    def score(prog):
        key = stackgp.render(prog)
        if key not in cache:
            cache[key] = surrogate.fitness(prog, fn, sampled, 100,
                                           surrogate.program_stream(seed, prog))
        return cache[key]
    pop = [score(stackgp.random_program(fn.dimension, 10, ranges, rng, min_length=10))
           for _ in range(pop_size)]
    for gen in range(generations):
        for _ in range(pop_size // 2):
            a, b = surrogate.tournament_select(pop, 4, rng)
            c1, c2 = stackgp.two_point_crossover(a.program, b.program, rng)
            for c in (c1, c2):
                if typed:
                    c = typed_mutate(c, 0.2, ranges, rng, jitter="jit" in variant)
                else:
                    c = stackgp.mutate(c, 0.2, ranges, rng)
                child = score(c)
                w = max(range(pop_size), key=lambda i: (pop[i].fitness, i))
                pop[w] = child
    return min(pop, key=lambda s: s.fitness)

variant = sys.argv[1]
fname = sys.argv[2]
fn = sg.get(fname, 2)
t0 = time.perf_counter()
f_ats = []
for seed in range(10):
    b = run(fn, seed, variant)
    f_ats.append(b.f_at_argmin)
    am = ",".join(f"{v:.4f}" for v in b.argmin)
    print(f"{fname} {variant} seed {seed}: f_at {b.f_at_argmin:.3e} fit {b.fitness:.3f} argmin ({am}) len {len(b.program)}", flush=True)
med = sorted(f_ats)[4]
print(f"== {fname} {variant}: median f_at {med:.4e}  (<=1e-2: {sum(v <= 1e-2 for v in f_ats)}/10)  [{time.perf_counter()-t0:.0f}s]", flush=True)
