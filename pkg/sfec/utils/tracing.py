# Copyright 2025 Google LLC
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
import logging
from typing import Any

from sfec.galois import Field

logger = logging.getLogger(__name__)


class DecodeTrace:
    """
    Collects the intermediate values of a Reed-Solomon decode so they can be
    rendered as a stable, diffable transcript.

    Every step is a plain dict with a ``stage`` key; values are either ints
    (field elements in vector form) or pre-rendered polynomial strings.
    """

    def __init__(self, field: Field, root_label: str = "a") -> None:
        """
        :param field: field used to render elements in power notation
        :param root_label: name of the generator-root base in the Chien table
        """
        self.field = field
        self.root_label = root_label
        self.steps: list[dict[str, Any]] = []

    def record(self, stage: str, **values: Any) -> None:
        step = {"stage": stage, **values}
        self.steps.append(step)
        logger.debug(f"decode trace: {json.dumps(step, default=str)}")

    def stage(self, name: str) -> list[dict[str, Any]]:
        return [s for s in self.steps if s["stage"] == name]

    def render(self) -> str:
        el = self.field.power_str
        lines: list[str] = []
        for step in self.steps:
            stage = step["stage"]
            if stage == "syndromes":
                lines.append("Syndromes:")
                for j, s in enumerate(step["values"]):
                    lines.append(f"  S_{step['fr'] + j} = {el(s)}")
                lines.append(f"  S(x) = {step['poly']}")
            elif stage == "eea_step":
                lines.append(
                    f"EEA step {step['step']}: Q = {step['quotient']}; "
                    f"remainder = {step['remainder']}; Lambda = {step['locator']}"
                )
            elif stage == "bm_step":
                lines.append(
                    f"BM step {step['step']}: discrepancy = {el(step['discrepancy'])}; "
                    f"Lambda = {step['locator']}"
                )
            elif stage == "key_equation":
                lines.append(f"Lambda(x) = {step['locator']}")
                lines.append(f"Omega(x) = {step['evaluator']}")
            elif stage == "chien":
                lines.append("Chien search:")
                for p, value in step["rows"]:
                    point = f"{self.root_label}^-{p}" if p else f"{self.root_label}^0"
                    lines.append(f"  Lambda({point}) = {el(value)}")
            elif stage == "magnitudes":
                lines.append(f"Error values ({step['method']}):")
                for position, z, y in step["values"]:
                    lines.append(f"  z = {el(z)}, position {position}, y = {el(y)}")
            elif stage == "result":
                lines.append(f"Status: {step['status']}")
                if step.get("reason"):
                    lines.append(f"Reason: {step['reason']}")
        return "\n".join(lines) + "\n"
