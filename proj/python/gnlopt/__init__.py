# Copyright 2026 The gnlopt Authors
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

"""Assortment and pricing optimization under generalized nested logit."""

from gnlopt._core import *  # noqa: F401,F403
from gnlopt._core import __doc__  # noqa: F401


def cardinality(m, cap):
    """Constraint set allowing at most ``cap`` of ``m`` products."""
    import numpy as np

    return LinearConstraintSet(np.ones((1, m)), np.array([float(cap)]))  # noqa: F405


__version__ = "0.1.0"
