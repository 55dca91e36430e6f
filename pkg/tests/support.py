import random

from gentlequivers.generators import GenerationError, random_gentle_quiver
from gentlequivers.transforms import can_coreflect, can_reflect, coreflect, reflect


def any_gentle(rng: random.Random, max_vertices: int = 14):
    """Random connected gentle quiver of any cycle rank, loops allowed."""
    while True:
        n = rng.randint(1, max_vertices)
        extra = rng.randint(0, max(1, n // 2))
        try:
            return random_gentle_quiver(rng, n, extra, allow_loops=rng.random() < 0.2)
        except GenerationError:
            continue


def legal_moves(g):
    moves = []
    for x in g.vertices:
        if can_reflect(g, x):
            moves.append((reflect, x))
        if can_coreflect(g, x):
            moves.append((coreflect, x))
    return moves


def random_chain(rng: random.Random, g, length: int):
    for _ in range(length):
        moves = legal_moves(g)
        if not moves:
            break
        op, x = rng.choice(moves)
        g = op(g, x)
    return g
