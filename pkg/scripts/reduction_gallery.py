"""Run the niceness pipeline over a gallery of descriptors and print the
reduction traces.

Usage: python3 scripts/reduction_gallery.py
"""

from nullcover.structure import (
    Cyclic,
    FiniteSum,
    Int,
    Padic,
    ProdOmega,
    Quasicyclic,
    Reals,
    SumOmega,
    Torus,
    descriptor_to_json,
    niceness_pipeline,
    r_power,
)


GALLERY = [
    Torus(),
    Padic(3),
    ProdOmega((Cyclic(2), Cyclic(3))),
    Reals(),
    r_power(3),
    Int(),
    Quasicyclic(5),
    SumOmega((Cyclic(2),)),
    FiniteSum((Int(), Torus())),
    FiniteSum((Cyclic(2), Torus())),
    FiniteSum((Padic(2), Padic(3))),
    FiniteSum((Int(), Reals(), Padic(2))),
    FiniteSum((FiniteSum((Int(), Torus())), ProdOmega((Cyclic(4),)))),
]


def main() -> None:
    for descriptor in GALLERY:
        result = niceness_pipeline(descriptor)
        print(f"{descriptor_to_json(descriptor)}")
        for step in result.steps:
            after = "" if step.after is None else f"  ->  {descriptor_to_json(step.after)}"
            print(f"    [{step.rule}]{after}")
        conditions = f"  (conditional on: {', '.join(result.side_conditions)})" if result.side_conditions else ""
        print(f"    verdict: {result.verdict}{conditions}")
        print()


if __name__ == "__main__":
    main()
