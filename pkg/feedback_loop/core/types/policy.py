from typing import List

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]

ContextVector = FloatArray
"""Per-step user context, shape (d,), entries in [-1, 1].
"""
PolicyParams = FloatArray
"""Weights of the softmax-linear policy, shape (|A|, d), one row per action.
"""
ActionDistribution = FloatArray
"""Probabilities over actions, shape (|A|,), non-negative and summing to 1.
"""
GradientVector = FloatArray
"""Gradient with the same shape as PolicyParams.
"""
ActionId = int
"""Index of an action in [0, |A|).
"""
Ranking = List[ActionId]
"""Actions ordered from most to least preferred.
"""
