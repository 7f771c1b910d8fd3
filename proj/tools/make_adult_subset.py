#!/usr/bin/env python3
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
"""Builds the 7-attribute Adult income subset used by the end-to-end tests.

Usage: make_adult_subset.py adult.data OUT_DIR [--rows 2000] [--seed 20230101]

adult.data is the raw UCI file (comma + space separated, no header).
Writes adult_subset.csv and adult_schema.json into OUT_DIR.
"""

import argparse
import csv
import json
import pathlib
import random

MARITAL = {
    "Married-civ-spouse": "Married",
    "Married-AF-spouse": "Married",
    "Married-spouse-absent": "Married",
    "Never-married": "Never married",
    "Divorced": "Divorced",
    "Separated": "Separated",
    "Widowed": "Widowed",
}

OCCUPATION = {
    "Exec-managerial": "Manager",
    "Prof-specialty": "Skilled Specialty",
    "Other-service": "Service",
    "Priv-house-serv": "Service",
    "Protective-serv": "Service",
    "Adm-clerical": "Clerical",
    "Sales": "Sales",
    "Tech-support": "Technician",
    "Craft-repair": "Blue Collar",
    "Machine-op-inspct": "Blue Collar",
    "Handlers-cleaners": "Blue Collar",
    "Transport-moving": "Blue Collar",
    "Farming-fishing": "Blue Collar",
    "Armed-Forces": "Armed Forces",
}

EDUCATION = {
    "Preschool": "Dropout", "1st-4th": "Dropout", "5th-6th": "Dropout",
    "7th-8th": "Dropout", "9th": "Dropout", "10th": "Dropout",
    "11th": "Dropout", "12th": "Dropout",
    "HS-grad": "High School",
    "Some-college": "Some College", "Assoc-voc": "Some College",
    "Assoc-acdm": "Some College",
    "Bachelors": "Bachelors",
    "Masters": "Masters",
    "Prof-school": "Professional",
    "Doctorate": "Doctorate",
}

POSITIVE = "Higher than $50,000"
NEGATIVE = "Lower than $50,000"


def schema():
    def cat(name, levels, mutable=True):
        return {"name": name, "kind": "categorical", "levels": levels,
                "mutable": mutable}

    def cont(name, lo, hi, step, mutable=True):
        return {"name": name, "kind": "continuous", "c_min": lo, "c_max": hi,
                "step": step, "mutable": mutable}

    return {
        "features": [
            cat("Marital status", ["Married", "Never married", "Divorced",
                                   "Separated", "Widowed"]),
            cont("Years of education", 1, 16, 1),
            cat("Occupation", ["Manager", "Skilled Specialty", "Service",
                               "Clerical", "Sales", "Technician",
                               "Blue Collar", "Armed Forces"]),
            cont("Age", 17, 90, 1, mutable=False),
            cat("Any capital gains", ["No", "Yes"]),
            cont("Working hours per week", 1, 99, 1),
            cat("Education", ["Dropout", "High School", "Some College",
                              "Bachelors", "Masters", "Professional",
                              "Doctorate"]),
        ],
        "target": "Income",
        "positive_label": POSITIVE,
        "negative_label": NEGATIVE,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("adult_data")
    ap.add_argument("out_dir")
    ap.add_argument("--rows", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=20230101)
    args = ap.parse_args()

    rows = []
    with open(args.adult_data) as f:
        for line in f:
            parts = [p.strip() for p in line.strip().split(",")]
            if len(parts) != 15 or parts[6] == "?":
                continue
            age, _, _, edu, edu_num, marital, occ = parts[:7]
            gain, hours, income = parts[10], parts[12], parts[14]
            rows.append([
                MARITAL[marital], edu_num, OCCUPATION[occ], age,
                "Yes" if int(gain) > 0 else "No", hours, EDUCATION[edu],
                POSITIVE if income.startswith(">") else NEGATIVE,
            ])

    random.Random(args.seed).shuffle(rows)
    rows = rows[: args.rows]

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sch = schema()
    header = [f["name"] for f in sch["features"]] + [sch["target"]]
    with open(out / "adult_subset.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    with open(out / "adult_schema.json", "w") as f:
        json.dump(sch, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
