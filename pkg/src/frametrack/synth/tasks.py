"""Task templates and their instantiation against a package database.

A generated task binds template placeholders to database-drawn values and is
verified at generation time: the requested fraction of tasks have a
non-empty search result for their constraints and the rest are guaranteed
to come up empty, so a batch of 20 tasks at rate 0.5 contains exactly 10
satisfiable ones.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from datetime import timedelta

from .database import Package, SearchQuery, search

_RETRIES = 2000


@dataclass(frozen=True)
class TaskTemplate:
    id: str
    text: str
    success_probability: float = 0.5
    fallback: str | None = None


DEFAULT_FALLBACK = "If nothing fits, you may go up to $200 over budget."

DEFAULT_TEMPLATES = (
    TaskTemplate(
        "basic-budget",
        "Book a trip to {dst_city} from {or_city} between {start_date} and {end_date} "
        "for {n_adults} adults. Keep the total under ${budget}.",
        fallback=DEFAULT_FALLBACK,
    ),
    TaskTemplate(
        "family",
        "Plan a vacation for {n_adults} adults and {n_children} kids leaving {or_city} "
        "for {dst_city} on {start_date}. Your ceiling is ${budget}.",
        fallback=DEFAULT_FALLBACK,
    ),
    TaskTemplate(
        "short-stay",
        "You have at most {max_duration} days off. Find a getaway to {dst_city} from "
        "{or_city} starting {start_date} with a budget of ${budget}.",
        fallback="If nothing fits, ask what the shortest available trip is.",
    ),
    TaskTemplate(
        "collector",
        "A rare stamp you have hunted for years will be auctioned in {dst_city}. Leave "
        "from {or_city} no earlier than {start_date}, {n_adults} of you are going, and "
        "the estate caps expenses at ${budget}. Compare a couple of options before booking.",
        fallback=DEFAULT_FALLBACK,
    ),
    TaskTemplate(
        "flexible-dates",
        "Treat yourself to {dst_city}. You leave from {or_city} around {start_date} and "
        "your dates are flexible. Spend at most ${budget} for {n_adults} adults.",
        fallback=DEFAULT_FALLBACK,
    ),
    TaskTemplate(
        "two-cities",
        "Your band is picking its next tour stop: {dst_city} or {alt_city}. You leave "
        "from {or_city} on {start_date} with {n_adults} people and ${budget} in the kitty. "
        "Ask about both and take the better deal.",
        fallback="If neither works, drop the cheaper city and retry.",
    ),
)


@dataclass
class GeneratedTask:
    template_id: str
    bindings: dict[str, str]
    query: SearchQuery
    expected_success: bool
    instruction: str
    fallback: str | None = None
    alt_query: SearchQuery | None = None


def _bindings_for(query: SearchQuery, extra: dict[str, str]) -> dict[str, str]:
    out: dict[str, str] = {}
    raw = query.to_dict()
    mapping = {
        "price_max": "budget",
        "dst_city": "dst_city",
        "or_city": "or_city",
        "max_duration": "max_duration",
        "n_adults": "n_adults",
        "n_children": "n_children",
        "start_date": "start_date",
        "end_date": "end_date",
    }
    for field_name, placeholder in mapping.items():
        if field_name in raw:
            value = raw[field_name]
            out[placeholder] = str(int(value)) if isinstance(value, float) and value == int(value) else str(value)
    out.update(extra)
    return out


def _query_for_template(template: TaskTemplate, package: Package, rng: random.Random) -> SearchQuery:
    dep = package.flight.departure_date_dep
    ret = package.flight.departure_date_arr
    start = dep - timedelta(days=rng.randint(0, 2))
    kwargs: dict = {
        "dst_city": package.dst_city,
        "or_city": package.or_city,
        "start_date": start,
        "price_max": float(math.ceil(package.price + rng.uniform(20, 400))),
        "n_adults": package.n_adults,
    }
    if "{end_date}" in template.text:
        kwargs["end_date"] = ret + timedelta(days=rng.randint(0, 2))
    if "{n_children}" in template.text:
        kwargs["n_children"] = package.n_children
    if "{max_duration}" in template.text:
        kwargs["max_duration"] = package.duration + rng.randint(0, 3)
    if template.id == "flexible-dates":
        kwargs["flex"] = True
        kwargs["start_date"] = dep - timedelta(days=rng.randint(2, 4))
        kwargs["end_date"] = ret + timedelta(days=rng.randint(2, 4))
    return SearchQuery(**kwargs)


def _break_query(q: SearchQuery, db: list[Package], rng: random.Random) -> SearchQuery | None:
    """Deform a satisfiable query until the database returns nothing."""
    candidates = []
    matching = search(db, q)
    if q.price_max is not None and matching:
        floor = min(p.price for p in matching)
        candidates.append(lambda: SearchQuery(**{**_to_kwargs(q), "price_max": float(int(floor - rng.uniform(1, 50)))}))
    if q.start_date is not None:
        def _shift():
            days = timedelta(days=rng.randint(200, 400))
            kwargs = _to_kwargs(q)
            kwargs["start_date"] = q.start_date + days
            if q.end_date is not None:
                kwargs["end_date"] = q.end_date + days
            return SearchQuery(**kwargs)

        candidates.append(_shift)
    candidates.append(lambda: SearchQuery(**{**_to_kwargs(q), "n_adults": 9}))
    rng.shuffle(candidates)
    for make in candidates:
        try:
            broken = make()
        except ValueError:
            continue
        if broken.price_max is not None and broken.price_max <= 0:
            continue
        if not search(db, broken):
            return broken
    return None


def _to_kwargs(q: SearchQuery) -> dict:
    return {
        "price_min": q.price_min,
        "price_max": q.price_max,
        "dst_city": q.dst_city,
        "max_duration": q.max_duration,
        "n_adults": q.n_adults,
        "n_children": q.n_children,
        "start_date": q.start_date,
        "end_date": q.end_date,
        "flex": q.flex,
        "or_city": q.or_city,
    }


def instantiate_tasks(
    templates: tuple[TaskTemplate, ...],
    db: list[Package],
    n: int,
    target_rate: float,
    seed: int,
) -> list[GeneratedTask]:
    """Draw ``n`` tasks whose satisfiable fraction is exactly
    ``round(target_rate * n) / n``, verified by running the search."""
    if not 0 <= target_rate <= 1:
        raise ValueError("target_rate must be within [0, 1]")
    if not db:
        raise ValueError("cannot instantiate tasks against an empty database")
    rng = random.Random(seed)
    n_success = int(math.floor(target_rate * n + 0.5))
    plan = [True] * n_success + [False] * (n - n_success)
    rng.shuffle(plan)

    tasks = []
    for i, want_success in enumerate(plan):
        template = templates[i % len(templates)]
        task = None
        for _ in range(_RETRIES):
            package = rng.choice(db)
            query = _query_for_template(template, package, rng)
            if want_success:
                if not search(db, query):
                    continue
            else:
                query = _break_query(query, db, rng)
                if query is None:
                    continue
            extra = {}
            alt_query = None
            if "{alt_city}" in template.text:
                others = sorted({p.dst_city for p in db if p.dst_city != query.dst_city})
                if not others:
                    continue
                extra["alt_city"] = rng.choice(others)
                alt_query = SearchQuery(**{**_to_kwargs(query), "dst_city": extra["alt_city"]})
            bindings = _bindings_for(query, extra)
            task = GeneratedTask(
                template_id=template.id,
                bindings=bindings,
                query=query,
                expected_success=want_success,
                instruction=template.text.format(**bindings),
                fallback=None if want_success else template.fallback,
                alt_query=alt_query,
            )
            break
        if task is None:
            direction = "satisfiable" if want_success else "unsatisfiable"
            raise ValueError(f"database cannot produce a {direction} task for template {template.id!r}")
        tasks.append(task)
    return tasks
