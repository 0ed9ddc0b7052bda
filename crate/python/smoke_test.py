#!/usr/bin/env python3
"""Smoke test for the patperm_py extension module.

Builds the cdylib with cargo (unless PATPERM_SO points at one), imports it,
and exercises the main types and operations end to end.

Usage: python3 python/smoke_test.py
"""

import json
import math
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def locate_cdylib():
    override = os.environ.get("PATPERM_SO")
    if override:
        return override
    subprocess.run(["cargo", "build", "-p", "patperm-py"], cwd=ROOT, check=True)
    for profile in ("debug", "release"):
        so = os.path.join(ROOT, "target", profile, "libpatperm_py.so")
        if os.path.exists(so):
            return so
    sys.exit("could not find libpatperm_py.so; run `cargo build -p patperm-py`")


def import_module(so_path):
    tmp = tempfile.mkdtemp(prefix="patperm-smoke-")
    shutil.copy(so_path, os.path.join(tmp, "patperm_py.so"))
    sys.path.insert(0, tmp)
    import patperm_py

    return patperm_py


def main():
    pp = import_module(locate_cdylib())
    patterns = ["123", "132", "213", "231", "312", "321"]

    # vertex order and validation
    assert pp.lex_compare([], [1]) == -1
    assert pp.lex_compare([1, 2], [2]) == -1
    assert pp.lex_compare([1], [1, 1]) == -1
    assert pp.validate_tree([[], [1], [2]])
    assert not pp.validate_tree([[], [2]])
    assert not pp.validate_tree([[1]])

    # trees and their structural operations
    t = pp.Tree.from_json("[[[]],[]]")  # root -> (child with one child, leaf)
    assert len(t) == 4
    assert t.degree([]) == 2
    assert t.degree([1]) == 1
    assert t.degree([7]) == -1
    assert t.vertices() == [[], [1], [1, 1], [2]]
    assert t.leaves() == [[1, 1], [2]]
    assert t.fringe([1]).to_json() == "[[]]"
    assert t.truncate(1).to_json() == "[[],[]]"
    assert t.count_at_height(1) == 2
    singleton = pp.Tree.singleton()
    grown = singleton.attach([], [singleton, singleton])
    assert grown.to_json() == "[[],[]]"
    assert grown.local_distance(grown) == 0.0
    assert grown.local_distance(singleton) > 0.0
    assert pp.Tree(t.vertices()) == t
    assert pp.Tree.from_preorder_degrees(t.preorder_degrees()) == t

    # pattern oracle
    assert pp.contains([2, 3, 1], "231")
    assert not pp.contains([1, 2, 3, 4], "321")
    assert pp.ltr_maxima([3, 1, 2, 4]) == [1, 4]
    for n in range(1, 7):
        for sigma in patterns:
            assert len(pp.avoiders(n, sigma)) == pp.catalan(n), (n, sigma)

    # bijections: image values, avoidance, bijectivity at n = 5
    assert pp.phi("321", t).values() == [2, 1, 3]
    for sigma in patterns:
        trees = pp.enumerate_trees(6)
        images = {tuple(pp.phi(sigma, s).values()) for s in trees}
        assert len(images) == len(trees) == pp.catalan(5)
        avoider_set = {tuple(v) for v in pp.avoiders(5, sigma)}
        assert images == avoider_set, sigma

    # explicit inverse for 321
    pi = pp.Permutation([3, 1, 2])
    back = pp.inverse_phi_321(pi)
    assert pp.phi("321", back) == pi
    s_vals, p_vals = pp.leaf_stats(back)
    assert s_vals == [3] and p_vals == [3]

    # samplers are deterministic in the seed
    a = pp.sample_uniform_tree(50, 7)
    b = pp.sample_uniform_tree(50, 7)
    assert a == b and len(a) == 50
    draw = pp.sample_gw(3, 1000)
    if draw is not None:
        assert len(draw) >= 1

    # the lazily grown size-biased tree
    spine = pp.SpineTree(12)
    spine.extend()
    k0 = spine.step_offspring(0)
    star = spine.truncate(1)
    assert star.degree([]) == k0
    assert len(spine.side_trees(0)) == k0 - 1
    assert spine.v_sequence(0) == [[]]
    assert spine.v_sequence(1)[1] == [1]
    ws = spine.w_sequence(3)
    assert len(ws) == 3

    for sigma in ["123", "132"]:
        assert spine.phi(sigma, 1) == math.inf
    for k in range(1, 8):
        assert spine.phi("312", k) != math.inf
    vals = [spine.phi_321(k) for k in range(1, 9)]
    assert len(set(vals)) == len(vals)

    # stability: values do not change after growing past the horizon
    before = [(sigma, k, spine.phi(sigma, k)) for sigma in patterns for k in range(1, 6)]
    for sigma in patterns:
        for k in range(1, 6):
            spine.stability_horizon(sigma, k)
    for _ in range(5):
        spine.extend()
    for sigma, k, value in before:
        assert spine.phi(sigma, k) == value, (sigma, k)

    # empirical laws arrive as JSON with exact counts
    law = json.loads(pp.sample_prefix_law("321", 2, 400, 2, 10, 5))
    assert law["total"] == 400
    assert sum(c for _, c in law["counts"]) == 400
    limit_law, errors = pp.limit_prefix_law("132", 300, 2, 30, 5)
    limit_law = json.loads(limit_law)
    assert limit_law["counts"] == [[["LARGE", "LARGE"], limit_law["total"]]]
    assert errors + limit_law["total"] == 300
    record = json.loads(pp.prefix_record(9, "123", 3))
    assert record["values"] == ["inf", "inf", "inf"]

    print("patperm_py smoke test OK")


if __name__ == "__main__":
    main()
