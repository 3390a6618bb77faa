"""Print the final-chain computation on one model, stage by stage.

Shows the distinct behaviour values per stage, the induced partitions
of states and of state/condition pairs, the kernel matrices, and the
minimised quotient.  Defaults to the six-state worked example.
"""

import argparse
import sys
from pathlib import Path

from ctsmin import (
    chain_init,
    chain_step,
    coalgebra_encode,
    kernel_matrix,
    lats_to_cts,
    minimise_chain,
    parse_model,
    pseudo_factorise,
    quotient_to_cts,
    serialise_model,
)
from ctsmin.models import Cts

DEFAULT = Path(__file__).resolve().parents[1] / "fixtures" / "EX1"


def show_matrix(m) -> None:
    for (x, y), conds in sorted(m.table().items()):
        if conds and x <= y:
            print(f"    R({x},{y}) = {{{', '.join(sorted(conds))}}}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("file", nargs="?", default=str(DEFAULT))
    parser.add_argument("--close", action="store_true")
    args = parser.parse_args(argv)

    model = parse_model(Path(args.file).read_text(), close=args.close)
    if not isinstance(model, Cts):
        model = lats_to_cts(model)
    c = coalgebra_encode(model)

    d = chain_init(c)
    stage = 0
    seen = None
    while True:
        partition, _, _ = pseudo_factorise(d)
        print(f"stage {stage}: {len(partition)} behaviour classes")
        values = sorted(
            {d.value(x, phi).pretty() for x in c.states for phi in c.conditions.elements}
        )
        for text in values:
            print(f"    {text}")
        show_matrix(kernel_matrix(d))
        if partition == seen:
            break
        seen = partition
        d = chain_step(c, d)
        stage += 1

    result = minimise_chain(c)
    print(
        f"stabilised at stage {result.stage},"
        f" confirmed at stage {result.confirmed_at}"
    )
    print(f"quotient states: {', '.join(result.quotient_states())}")
    print()
    sys.stdout.write(serialise_model(quotient_to_cts(result, model.conditions)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
