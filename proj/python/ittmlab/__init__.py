# Copyright 2026 The ittmlab Authors
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

"""Transfinite machine runs, feedback trees and finite games."""

import json

from . import _core
from ._core import IttmError

__all__ = [
    "IttmError",
    "ordinal",
    "ordinal_add",
    "ordinal_sub",
    "ordinal_cmp",
    "run",
    "feedback",
    "corpus_verify",
    "solve",
    "search",
]


def ordinal(text):
    """Canonical text of an ordinal below epsilon_0, e.g. "w+w" -> "w*2"."""
    return _core.ordinal_normalize(text)


def ordinal_add(a, b):
    return _core.ordinal_add(a, b)


def ordinal_sub(a, b):
    """Left subtraction: the g with b + g = a."""
    return _core.ordinal_sub(a, b)


def ordinal_cmp(a, b):
    return _core.ordinal_cmp(a, b)


def run(source, input="", budget=10000, variant=""):
    """Runs .itm source text and returns the verdict as a dict."""
    return json.loads(_core.run_source(source, input, budget, variant))


def feedback(name, input="", oracle="ej", budget=10000):
    """Evaluates a registry program with its queries answered depth first."""
    return json.loads(_core.feedback(name, input, oracle, budget))


def corpus_verify():
    return json.loads(_core.corpus_verify())


def _game_text(game):
    return game if isinstance(game, str) else json.dumps(game)


def solve(game):
    """Winner and verified strategy for a game dict or JSON string."""
    return json.loads(_core.solve_game(_game_text(game)))


def search(game, schedule=()):
    return json.loads(_core.search_game(_game_text(game), list(schedule)))
