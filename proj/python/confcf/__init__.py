# Copyright 2026 The confcf Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Confidence counterfactual explanations for logistic models."""

import json

from ._core import ConfcfError, confidence, format_percent, payout_cents
from . import _core

__all__ = [
    "ConfcfError",
    "Model",
    "confidence",
    "format_percent",
    "payout_cents",
    "score_answers",
    "train",
]


class Model:
    """Trained binary logistic model with a dataset schema."""

    def __init__(self, core):
        self._core = core

    @classmethod
    def load(cls, path):
        return cls(_core.Model.load(str(path)))

    @classmethod
    def from_dict(cls, data):
        return cls(_core.Model.from_json(json.dumps(data)))

    def to_dict(self):
        return json.loads(self._core.to_json())

    def save(self, path):
        self._core.save(str(path))

    @property
    def schema(self):
        return json.loads(self._core.schema_json())

    @property
    def decision_boundary(self):
        return self._core.decision_boundary

    def predict(self, instance):
        return json.loads(self._core.predict_json(json.dumps(instance)))

    def counterfactual(self, query, oracle=False):
        return json.loads(self._core.counterfactual_json(json.dumps(query), oracle))

    def sentence(self, query):
        return self._core.sentence(json.dumps(query))

    def ice(self, instance, feature, measure="margin"):
        return json.loads(self._core.ice_json(json.dumps(instance), feature, measure))

    def explain(self, query, alternatives=2):
        return json.loads(self._core.explain_json(json.dumps(query), alternatives))

    def generate_questions(self, n=10, seed=1, condition="control", min_gap=0.02):
        return json.loads(
            self._core.generate_questions_json(n, seed, condition, min_gap))


def train(data, schema):
    """Trains on a CSV file; returns (model, training accuracy, report)."""
    core, acc, iterations, converged = _core.train_csv(str(data), str(schema))
    return Model(core), acc, {"iterations": iterations, "converged": converged}


def score_answers(questions, answers_csv, participant="participant"):
    return json.loads(
        _core.score_answers_json(json.dumps(questions), answers_csv, participant))
