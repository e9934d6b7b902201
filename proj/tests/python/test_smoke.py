# Copyright 2026 The polarkit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import json
import math

import numpy as np
import pytest

import polarkit as pk


def quick():
    e = pk.Effort()
    e.finest_level = 5
    e.refine_restarts = 0
    e.restarts = 4
    return e


def test_body_basics():
    square = pk.ConvexBody.cube(2, 1.0)
    assert square.dim == 2
    assert square.gauge(np.array([2.0, 1.0])) == pytest.approx(2.0)
    assert square.support(np.array([1.0, 1.0])) == pytest.approx(2.0)
    cross = pk.ConvexBody.builtin("l1:2")
    assert cross.polar().gauge(np.array([0.3, -0.7])) == pytest.approx(0.7)
    e = pk.ConvexBody.ellipsoid(np.diag([4.0, 1.0]))
    assert e.support(np.array([1.0, 0.0])) == pytest.approx(0.5)
    again = pk.ConvexBody.from_json(e.to_json())
    assert again.gauge(np.array([0.2, 0.9])) == e.gauge(np.array([0.2, 0.9]))


def test_invalid_input_raises_value_error():
    with pytest.raises(ValueError):
        pk.ConvexBody.builtin("nosuch:2")


def test_covering_and_certificate():
    K = pk.ConvexBody.cube(1, 3.0)
    T = pk.ConvexBody.cube(1, 1.0)
    b = pk.covering_bracket(K, T, effort=quick())
    assert (b.lo, b.hi) == (3, 3)
    assert len(b.centers) == 3
    doc = pk.covering_certificate(K, T, 1.0, False, b)
    assert pk.verify_certificate(doc)["ok"]
    bad = json.loads(doc)
    bad["lo"] = 4
    report = pk.verify_certificate(json.dumps(bad))
    assert not report["ok"]
    assert report["detail"]


def test_entropy_and_gamma():
    K = pk.ConvexBody.cube(1, 4.0)
    T = pk.ConvexBody.cube(1, 1.0)
    e = pk.entropy_bracket(K, T, 2, quick())
    assert e.lo <= 1.0 <= e.hi
    assert pk.dudley_constant(2.0) == pytest.approx(1.0 / (2.0 * (1.0 - 2 ** -0.5)))
    assert pk.dyadic_step_holds(2.0, 5)
    space = pk.FiniteMetricSpace(np.array([[0.0, 1.5], [1.5, 0.0]]))
    assert pk.gamma_exact(space, 2.0) == pytest.approx(1.5)
    assert pk.gamma_exact(space, 2.0, "literal") == 0.0
    est = pk.gamma_estimates(pk.FiniteMetricSpace.random_euclidean(6, 2, 1), 2.0)
    assert est["sudakov_lo"] <= est["exact"] + 1e-6


def test_separation():
    I = pk.ConvexBody.cube(1, 1.0)
    c = pk.separation_lower(I, I, effort=quick())
    assert len(c) == 3
    assert pk.verify_separation(I, I, c)
    assert pk.verify_certificate(pk.separation_certificate(I, I, c))["ok"]


def test_gaussian_mc():
    mean, se = pk.gaussian_sup_mc(pk.ConvexBody.cube(2, 1.0), np.eye(2), samples=20000, seed=3)
    assert abs(mean - 2.0 * math.sqrt(2.0 / math.pi)) <= 4.0 * se


def test_duality_scan_shape():
    pairs = pk.generate_family("l1-linf")
    assert [p.id for p in pairs] == ["l1-linf-0", "l1-linf-0/polar"]
    rows = pk.duality_scan(pairs[:1], [1.0, 2.0, 4.0], quick())
    assert len(rows) == 3
    assert all("degenerate" in r.flags for r in rows)
    assert pk.duality_csv(rows).startswith("pair_id,family,n,a,")
    with pytest.raises(ValueError):
        pk.fit_constants_json(rows)
