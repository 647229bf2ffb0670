"""Print the model table, the homogeneous curve table and the prolongation dims."""

import argparse
import json

from legendrian235.legcurve import (CATALOG_NAMES, aut_dimension, catalog_spec, classify,
                                    compatible_sigma)
from legendrian235.liealg import SIGMA_SYM3, gl2_basis, heis_build, sym3_embed, tanaka_prolong
from legendrian235.models235 import MODEL_NAMES, model_invariants


def model_rows():
    for name in MODEL_NAMES:
        inv = model_invariants(name)
        yield {"model": name, "A": inv.A.to_json(), "fA": str(inv.fA),
               "q0": "nonzero" if inv.q0_nonzero else "0", "I": str(inv.I_cls)}


def catalog_rows():
    for name in CATALOG_NAMES:
        spec = catalog_spec(name)
        cls = classify(spec)
        yield {"representative": name, "kind": cls.kind,
               "I": None if cls.invariant_cls is None else str(cls.invariant_cls),
               "aut_dim": aut_dimension(spec), "sigma": compatible_sigma(spec).to_json()}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true", help="emit one JSON document")
    args = ap.parse_args()
    res = tanaka_prolong(heis_build(SIGMA_SYM3), [sym3_embed(X) for X in gl2_basis()], 5)
    doc = {"models": list(model_rows()), "catalog": list(catalog_rows()),
           "prolongation_gl2": res.to_json()}
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
        return
    print("Model  f_A                          I")
    for row in doc["models"]:
        print(f"{row['model']:6} {row['fA']:28} {row['I']}")
    print("\nRepresentative  kind            aut  I")
    for row in doc["catalog"]:
        print(f"{row['representative']:15} {row['kind']:15} {row['aut_dim']:<4} {row['I'] or '-'}")
    print(f"\npr(heis, gl(2)) positive dims {res.dims}, total {res.total}")


if __name__ == "__main__":
    main()
