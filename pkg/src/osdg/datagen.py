"""Deterministic synthetic corpora shaped like the community dataset.

The real quarterly releases live on an external repository and are not
bundled; these generators produce release-shaped CSVs (same columns, same
invariants, configurable row count) so ingestion, training and the service
can be exercised end to end offline. Texts are built from per-SDG theme
pools seeded by the bundled ontology, with shared filler vocabulary and a
controlled share of rejected/contested labels.
"""

import csv
import hashlib
import math
import random
from collections import defaultdict
from pathlib import Path

from osdg.corpus import CSV_COLUMNS, Corpus, LabeledSnippet, recompute_agreement
from osdg.ontology import load_ontology
from osdg.sdg import TRAINABLE_SDGS

RELEASE_ROW_COUNT = 37_575

_TEMPLATES = [
    "This study examines {a} and {b} in {where}.",
    "The report highlights {a}, with particular attention to {b}.",
    "Policies supporting {a} can strengthen {b} over time.",
    "Recent programmes on {a} have improved {b} in {where}.",
    "We assess how {a} relates to {b} across {where}.",
    "Investments in {a} contributed to measurable gains in {b}.",
    "The analysis links {a} with {b} and related outcomes.",
    "Stakeholders prioritised {a} alongside {b} during the consultation.",
    "Evidence from {where} suggests that {a} supports {b}.",
    "Researchers evaluated {a} as a driver of {b}.",
]

_PLACES = [
    "developing countries",
    "the region",
    "low income settings",
    "urban areas",
    "rural communities",
    "member states",
    "the study area",
    "several countries",
    "national programmes",
    "pilot districts",
]

# topic-neutral phrases shared by every SDG so texts are not trivially
# separable by vocabulary alone
_GENERIC = [
    "policy coherence", "data collection", "monitoring frameworks", "stakeholder engagement",
    "capacity building", "institutional reform", "implementation gaps", "survey results",
    "evaluation methods", "funding mechanisms", "regional cooperation", "national strategies",
    "legal frameworks", "long term planning", "community participation", "pilot projects",
    "best practices", "impact assessment", "governance arrangements", "reporting requirements",
    "budget allocations", "administrative records", "baseline indicators", "target setting",
    "expert consultations", "programme design", "cost effectiveness", "evidence synthesis",
    "public awareness", "coordination mechanisms", "annual reviews", "technical assistance",
    "statistical capacity", "intervention coverage", "sectoral reforms", "accountability measures",
    "workforce planning", "procurement processes", "risk assessments", "performance indicators",
]

# extra per-SDG wording that is NOT in the ontology, so the models see more
# than the keyword stage does
_EXTRA = {
    1: ["deprivation indices", "household consumption", "means tested benefits", "informal settlements income", "subsistence livelihoods", "asset ownership", "pension coverage", "minimum income schemes"],
    2: ["harvest seasons", "fertilizer application", "pastoralist communities", "grain reserves", "farm cooperatives", "post harvest losses", "breastfeeding practices", "calorie intake"],
    3: ["clinical trials", "hospital admissions", "antenatal visits", "disease surveillance", "treatment adherence", "diagnostic capacity", "emergency obstetric care", "antimicrobial resistance"],
    4: ["classroom observation", "standardised assessments", "school governance", "parental involvement", "textbook provision", "pupil teacher ratios", "learning poverty", "digital classrooms"],
    5: ["quota systems", "care responsibilities", "household decision making", "title deeds for women", "board representation", "safe public transport for women", "girls enrolment", "norm change campaigns"],
    6: ["pipe networks", "pump maintenance", "water tariffs", "faecal sludge", "catchment protection", "household connections", "chlorination", "water point mapping"],
    7: ["feed in tariffs", "grid stability", "transmission lines", "energy audits", "fuel imports", "generation capacity", "metering systems", "appliance standards"],
    8: ["wage growth", "collective bargaining", "apprenticeship schemes", "enterprise surveys", "informal sector", "labour inspections", "severance protections", "employment elasticity"],
    9: ["industrial parks", "freight corridors", "standards certification", "supplier networks", "prototype testing", "production lines", "quality infrastructure", "incubation hubs"],
    10: ["quintile analysis", "social transfers", "inclusion audits", "visa pathways", "diaspora networks", "wage compression", "regional disparities", "horizontal inequalities"],
    11: ["zoning regulations", "transit corridors", "tenure security", "building retrofits", "congestion pricing", "neighbourhood upgrading", "municipal budgets", "street lighting"],
    12: ["material flows", "product labelling", "repair services", "deposit refund schemes", "industrial symbiosis", "waste audits", "secondary raw materials", "durability standards"],
    13: ["adaptation plans", "vulnerability mapping", "emission inventories", "carbon budgets", "resilient crops", "flood defences", "heatwave plans", "transition pathways"],
    14: ["catch quotas", "vessel monitoring", "spawning grounds", "benthic habitats", "port inspections", "stock assessments", "no take zones", "gear restrictions"],
    15: ["canopy cover", "seed banks", "ranger patrols", "habitat corridors", "grazing pressure", "peatlands", "species inventories", "restoration nurseries"],
    16: ["case backlogs", "police reform", "asset recovery", "whistleblower protection", "electoral integrity", "detention conditions", "legal aid", "procurement transparency"],
}

# relative share of rows per candidate SDG (roughly mirrors an uneven
# volunteer-driven collection)
_SDG_WEIGHTS = {
    1: 5.2, 2: 5.4, 3: 7.8, 4: 8.0, 5: 7.4, 6: 6.6, 7: 7.6, 8: 5.6,
    9: 5.0, 10: 5.2, 11: 6.4, 12: 5.4, 13: 7.0, 14: 5.8, 15: 6.2, 16: 5.4,
}


def _theme_pools() -> dict[int, list[str]]:
    ontology = load_ontology(Path(__file__).parent / "data" / "seed_ontology.csv")
    pools: dict[int, list[str]] = defaultdict(list)
    for term in ontology.terms:
        pools[term.sdg].append(" ".join(term.phrase))
    for sdg, extras in _EXTRA.items():
        pools[sdg].extend(extras)
    return dict(pools)


def _sentence(rng: random.Random, pool: list[str], noise_pool: list[str] | None) -> str:
    def pick() -> str:
        roll = rng.random()
        if roll < 0.35:
            return rng.choice(_GENERIC)
        if noise_pool and roll < 0.47:
            return rng.choice(noise_pool)
        return rng.choice(pool)

    return rng.choice(_TEMPLATES).format(a=pick(), b=pick(), where=rng.choice(_PLACES))


def _text(rng: random.Random, pool: list[str], other_pools: list[list[str]]) -> str:
    n_sentences = rng.randint(3, 6)
    noise = rng.choice(other_pools) if other_pools else None
    sentences = [_sentence(rng, pool, noise) for _ in range(n_sentences)]
    # some snippets bury the theme: replace most sentences with generic ones
    if rng.random() < 0.12:
        keep = rng.randrange(n_sentences)
        sentences = [
            s if i == keep else _sentence(rng, _GENERIC, None) for i, s in enumerate(sentences)
        ]
    return " ".join(sentences)


def _majority_votes(rng: random.Random, positive: bool) -> tuple[int, int]:
    total = rng.randint(3, 9)
    # mostly decisive margins (agreement >= 0.6 needs winners >= 0.8 * total)
    if rng.random() < 0.75:
        winners = rng.randint(math.ceil(0.8 * total), total)
    else:
        winners = rng.randint(total // 2 + 1, total)
    losers = total - winners
    return (winners, losers) if positive else (losers, winners)


def _tie_votes(rng: random.Random) -> tuple[int, int]:
    half = rng.choice([2, 3, 4])
    return half, half


def _row_counts(n_rows: int) -> dict[int, int]:
    total_weight = sum(_SDG_WEIGHTS.values())
    counts = {s: int(n_rows * w / total_weight) for s, w in _SDG_WEIGHTS.items()}
    remainder = n_rows - sum(counts.values())
    for sdg in sorted(_SDG_WEIGHTS, key=_SDG_WEIGHTS.get, reverse=True)[:remainder]:
        counts[sdg] += 1
    return counts


def generate_release(n_rows: int = RELEASE_ROW_COUNT, seed: int = 2022_07) -> Corpus:
    """A release-shaped corpus: one row per (text, candidate SDG) with votes."""
    rng = random.Random(seed)
    pools = _theme_pools()
    snippets: list[LabeledSnippet] = []
    counts = _row_counts(n_rows)
    serial = 0
    for sdg in TRAINABLE_SDGS:
        pool = pools[sdg]
        other_sdgs = [s for s in TRAINABLE_SDGS if s != sdg]
        other_pools = [pools[s] for s in other_sdgs]
        for _ in range(counts[sdg]):
            serial += 1
            roll = rng.random()
            if roll < 0.79:  # volunteers accepted the candidate label
                text = _text(rng, pool, other_pools)
                pos, neg = _majority_votes(rng, positive=True)
            elif roll < 0.82:  # accepted despite an off-topic text (volunteer error)
                text = _text(rng, rng.choice(other_pools), other_pools)
                pos, neg = _majority_votes(rng, positive=True)
            elif roll < 0.94:  # off-topic text, label rejected
                text = _text(rng, rng.choice(other_pools), other_pools)
                pos, neg = _majority_votes(rng, positive=False)
            else:  # contested: mixed themes, split vote
                mixed = pool + rng.choice(other_pools)
                text = _text(rng, mixed, other_pools)
                pos, neg = _tie_votes(rng)
            text_id = hashlib.sha1(f"{seed}:{serial}".encode()).hexdigest()[:16]
            doi = f"10.5555/{text_id[:8]}" if rng.random() < 0.7 else None
            snippets.append(
                LabeledSnippet(
                    text_id=text_id,
                    text=text,
                    sdg=sdg,
                    labels_positive=pos,
                    labels_negative=neg,
                    agreement=recompute_agreement(pos, neg),
                    source_ref=doi,
                )
            )
    rng.shuffle(snippets)
    return Corpus(snippets=snippets)


def write_task_pool(path: str | Path, n_tasks: int, seed: int = 7) -> list[str]:
    """Snippet pool CSV for the labeling platform (vote counts zeroed).

    Returns the task ids in file order.
    """
    rng = random.Random(seed)
    pools = _theme_pools()
    task_ids: list[str] = []
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for i in range(n_tasks):
            sdg = rng.choice(TRAINABLE_SDGS)
            other = [pools[s] for s in TRAINABLE_SDGS if s != sdg]
            text = _text(rng, pools[sdg], other)
            task_id = f"task-{i:05d}"
            task_ids.append(task_id)
            writer.writerow(["", task_id, text, sdg, 0, 0, "0.0"])
    return task_ids


def main(argv=None):
    import argparse

    parser = argparse.ArgumentParser(description="write a synthetic release-shaped dataset CSV")
    parser.add_argument("out", help="output CSV path")
    parser.add_argument("--rows", type=int, default=RELEASE_ROW_COUNT)
    parser.add_argument("--seed", type=int, default=2022_07)
    args = parser.parse_args(argv)
    from osdg.corpus import write_corpus

    write_corpus(generate_release(args.rows, args.seed), args.out)
    print(f"wrote {args.rows} rows to {args.out}")


if __name__ == "__main__":
    main()
