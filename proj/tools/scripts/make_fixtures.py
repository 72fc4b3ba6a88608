#!/usr/bin/env python3
"""Regenerates the scripted mock dialogues under data/fixtures from data/samples."""
import json
import pathlib

root = pathlib.Path(__file__).resolve().parents[2]
samples = root / "data" / "samples" / "case_study"


def text(name):
    return (samples / name).read_text()


def rec(agent, stage, attempt, body):
    return {"agent": agent, "stage": stage, "attempt": attempt, "text": body}


summaries = {
    "selection": "A sofa, coffee table, TV stand, dining table with four chairs, a floor lamp, a rug and three plants.",
    "constraints": "Sofa and TV stand sit on walls, the coffee table faces the sofa, chairs tuck under the dining table.",
    "score_terms": "The sofa keeps its distance from the door and faces the TV; plants stay near the window.",
}

case = [
    rec("spatial", "selection", 1, text("selection_initial.txt")),
    rec("spatial", "selection", 2, text("selection.txt")),
    rec("interactive", "selection", 1,
        "A sofa, armchair, coffee table, two side tables, TV stand, dining table with four chairs, a floor lamp and a rug."),
    rec("interactive", "selection", 2, summaries["selection"]),
    rec("spatial", "constraints", 1, text("constraints.txt")),
    rec("interactive", "constraints", 1, summaries["constraints"]),
    rec("spatial", "score_terms", 1, text("score_terms.txt")),
    rec("interactive", "score_terms", 1, summaries["score_terms"]),
]
for stage in ("selection", "constraints", "score_terms"):
    case.append(rec("grader", stage, 1, "Score: 88"))

case_fixture = {
    "supports_images": False,
    "responses": case,
    "decisions": [
        {"accept": False,
         "feedback": "I don't want any side tables and armchair. Add 3 plants to make room more vivid."},
        {"accept": True},
        {"accept": True},
        {"accept": True},
    ],
}

auto = [
    rec("spatial", "selection", 1, text("selection_initial.txt")),
    rec("spatial", "selection", 2, text("selection.txt")),
    rec("spatial", "selection", 3, text("selection_initial.txt")),
    rec("spatial", "constraints", 1, text("constraints.txt")),
    rec("spatial", "score_terms", 1, text("score_terms.txt")),
]
for stage in ("selection", "constraints", "score_terms"):
    auto.append(rec("interactive", stage, 1, summaries[stage]))
    auto.append(rec("grader", stage, 1, "Score: 40"))
    auto.append(rec("grader", stage, 2, "Score: 62"))
    auto.append(rec("grader", stage, 3, "Score: 55"))

auto_fixture = {"supports_images": False, "responses": auto}

out = root / "data" / "fixtures"
(out / "case_study.json").write_text(json.dumps(case_fixture, indent=2) + "\n")
(out / "auto_subthreshold.json").write_text(json.dumps(auto_fixture, indent=2) + "\n")
