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
"""Certified covering, separation and chaining bounds for symmetric convex bodies."""

from ._polarkit import (
    BodyPair,
    BudgetExceeded,
    ConvexBody,
    CountBracket,
    DualityRow,
    Effort,
    EntropyBracket,
    FiniteMetricSpace,
    InvalidArgument,
    PolarkitError,
    SeparationCertificate,
    Tolerances,
    Unsupported,
    covering_bracket,
    covering_certificate,
    dudley_constant,
    duality_csv,
    duality_scan,
    dyadic_step_holds,
    entropy_bracket,
    entropy_certificate,
    entropy_sequence,
    family_ids,
    finite_entropy_numbers,
    fit_constants_json,
    gamma_estimates,
    gamma_exact,
    gaussian_sup_mc,
    generate_family,
    separation_certificate,
    separation_duality,
    separation_lower,
    verify_certificate,
    verify_separation,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
