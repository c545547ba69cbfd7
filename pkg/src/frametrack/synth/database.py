"""Random vacation-package database with the wizard-side search and the
constraint-relaxation suggestion mechanism.

Search filters on every set query field, widens the date window by two days
on each side when the dates are flexible, sorts by increasing price, and
returns at most ten packages. When a query has no results, ``suggest``
relaxes constraints one at a time in a fixed priority order (budget in
$200 steps, dates by one day a side, duration by one day, category, then
dropping the city) until something matches, and reports which relaxations
were applied.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from datetime import date, timedelta
from importlib import resources

MAX_RESULTS = 10
FLEX_DAYS = 2

BUDGET_STEP = 200.0
DATE_STEP_DAYS = 1
DURATION_STEP_DAYS = 1
MAX_RELAX_STEPS = 3

AMENITY_RATES = {"breakfast": 0.5, "parking": 0.4, "wifi": 0.6, "gym": 0.3, "spa": 0.2}
VICINITY_RATES = {
    "park": 0.3,
    "museum": 0.25,
    "beach": 0.3,
    "shopping": 0.35,
    "market": 0.25,
    "airport": 0.2,
    "university": 0.15,
    "mall": 0.2,
    "cathedral": 0.15,
    "downtown": 0.35,
    "palace": 0.1,
    "theatre": 0.2,
}

SEATS = ("economy", "business")


def _pools() -> dict:
    with resources.files("frametrack.synth").joinpath("pools.json").open(encoding="utf-8") as fp:
        return json.load(fp)


@dataclass(frozen=True)
class Flight:
    seat: str
    departure_date_dep: date
    departure_date_arr: date
    departure_time_dep: str
    arrival_time_dep: str
    departure_time_arr: str
    arrival_time_arr: str
    duration_dep: str
    duration_arr: str


@dataclass(frozen=True)
class Hotel:
    name: str
    country: str
    city: str
    category: float
    gst_rating: float
    amenities: frozenset[str] = frozenset()
    vicinity: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Package:
    price: float
    duration: int
    or_city: str
    n_adults: int
    n_children: int
    hotel: Hotel
    flight: Flight

    @property
    def dst_city(self) -> str:
        return self.hotel.city

    def to_dict(self) -> dict:
        """JSON shape used in ``db`` turn fields and database exports; amenity
        and vicinity booleans are serialized only when true."""
        hotel = {
            "name": self.hotel.name,
            "country": self.hotel.country,
            "city": self.hotel.city,
            "category": self.hotel.category,
            "gst_rating": self.hotel.gst_rating,
        }
        for key in sorted(self.hotel.amenities | self.hotel.vicinity):
            hotel[key] = True
        return {
            "price": self.price,
            "duration": self.duration,
            "or_city": self.or_city,
            "n_adults": self.n_adults,
            "n_children": self.n_children,
            "hotel": hotel,
            "flight": {
                "seat": self.flight.seat,
                "departure_date_dep": self.flight.departure_date_dep.isoformat(),
                "departure_date_arr": self.flight.departure_date_arr.isoformat(),
                "departure_time_dep": self.flight.departure_time_dep,
                "arrival_time_dep": self.flight.arrival_time_dep,
                "departure_time_arr": self.flight.departure_time_arr,
                "arrival_time_arr": self.flight.arrival_time_arr,
                "duration_dep": self.flight.duration_dep,
                "duration_arr": self.flight.duration_arr,
            },
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Package":
        hotel_obj = dict(obj["hotel"])
        flight_obj = dict(obj["flight"])
        known = {"name", "country", "city", "category", "gst_rating"}
        bools = {k for k, v in hotel_obj.items() if k not in known and v is True}
        hotel = Hotel(
            name=hotel_obj["name"],
            country=hotel_obj["country"],
            city=hotel_obj["city"],
            category=float(hotel_obj["category"]),
            gst_rating=float(hotel_obj["gst_rating"]),
            amenities=frozenset(bools & set(AMENITY_RATES)),
            vicinity=frozenset(bools & set(VICINITY_RATES)),
        )
        flight = Flight(
            seat=flight_obj["seat"],
            departure_date_dep=date.fromisoformat(flight_obj["departure_date_dep"]),
            departure_date_arr=date.fromisoformat(flight_obj["departure_date_arr"]),
            departure_time_dep=flight_obj["departure_time_dep"],
            arrival_time_dep=flight_obj["arrival_time_dep"],
            departure_time_arr=flight_obj["departure_time_arr"],
            arrival_time_arr=flight_obj["arrival_time_arr"],
            duration_dep=flight_obj["duration_dep"],
            duration_arr=flight_obj["duration_arr"],
        )
        return cls(
            price=float(obj["price"]),
            duration=int(obj["duration"]),
            or_city=obj["or_city"],
            n_adults=int(obj["n_adults"]),
            n_children=int(obj["n_children"]),
            hotel=hotel,
            flight=flight,
        )


@dataclass(frozen=True)
class SearchQuery:
    """The ten searchable fields; unset fields do not constrain."""

    price_min: float | None = None
    price_max: float | None = None
    dst_city: str | None = None
    max_duration: int | None = None
    n_adults: int | None = None
    n_children: int | None = None
    start_date: date | None = None
    end_date: date | None = None
    flex: bool | None = None
    or_city: str | None = None

    def __post_init__(self):
        if self.price_min is not None and self.price_max is not None and self.price_min > self.price_max:
            raise ValueError(f"price_min {self.price_min} exceeds price_max {self.price_max}")

    def to_dict(self) -> dict:
        out = {}
        for key in (
            "price_min",
            "price_max",
            "dst_city",
            "max_duration",
            "n_adults",
            "n_children",
            "start_date",
            "end_date",
            "flex",
            "or_city",
        ):
            value = getattr(self, key)
            if value is None:
                continue
            out[key] = value.isoformat() if isinstance(value, date) else value
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "SearchQuery":
        kwargs = dict(obj)
        for key in ("start_date", "end_date"):
            if key in kwargs and isinstance(kwargs[key], str):
                kwargs[key] = date.fromisoformat(kwargs[key])
        return cls(**kwargs)


def generate_database(seed: int, n_packages: int) -> list[Package]:
    """Deterministic random database; city and hotel pools come from the
    bundled data file."""
    if n_packages <= 0:
        raise ValueError("n_packages must be positive")
    pools = _pools()
    cities = sorted(pools["cities"])
    origins = sorted(pools["origin_cities"])
    countries = pools["cities"]
    hotel_names = pools["hotel_names"]
    times = pools["times"]
    rng = random.Random(seed)
    window_start = date(2016, 8, 1)
    packages = []
    for _ in range(n_packages):
        dst = rng.choice(cities)
        origin = rng.choice(origins)
        duration = rng.randint(1, 14)
        dep = window_start + timedelta(days=rng.randint(0, 120))
        ret = dep + timedelta(days=duration)
        hotel = Hotel(
            name=rng.choice(hotel_names),
            country=countries[dst],
            city=dst,
            category=rng.randint(2, 10) / 2.0,
            gst_rating=round(rng.uniform(1.0, 10.0), 2),
            amenities=frozenset(k for k, p in sorted(AMENITY_RATES.items()) if rng.random() < p),
            vicinity=frozenset(k for k, p in sorted(VICINITY_RATES.items()) if rng.random() < p),
        )
        flight = Flight(
            seat=rng.choice(SEATS),
            departure_date_dep=dep,
            departure_date_arr=ret,
            departure_time_dep=rng.choice(times),
            arrival_time_dep=rng.choice(times),
            departure_time_arr=rng.choice(times),
            arrival_time_arr=rng.choice(times),
            duration_dep=f"{rng.randint(1, 14)}h{rng.choice(('00', '15', '30', '45'))}m",
            duration_arr=f"{rng.randint(1, 14)}h{rng.choice(('00', '15', '30', '45'))}m",
        )
        packages.append(
            Package(
                price=round(rng.uniform(300.0, 4200.0), 2),
                duration=duration,
                or_city=origin,
                n_adults=rng.randint(1, 8),
                n_children=rng.randint(0, 4),
                hotel=hotel,
                flight=flight,
            )
        )
    return packages


def save_database(db: list[Package], path) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        json.dump([p.to_dict() for p in db], fp, ensure_ascii=False, indent=1)
        fp.write("\n")


def load_database(path) -> list[Package]:
    with open(path, encoding="utf-8") as fp:
        return [Package.from_dict(obj) for obj in json.load(fp)]


def _window(q: SearchQuery) -> tuple[date | None, date | None]:
    start, end = q.start_date, q.end_date
    if q.flex:
        if start is not None:
            start = start - timedelta(days=FLEX_DAYS)
        if end is not None:
            end = end + timedelta(days=FLEX_DAYS)
    return start, end


def matches(package: Package, q: SearchQuery) -> bool:
    if q.price_min is not None and package.price < q.price_min:
        return False
    if q.price_max is not None and package.price > q.price_max:
        return False
    if q.dst_city is not None and package.dst_city.casefold() != q.dst_city.casefold():
        return False
    if q.or_city is not None and package.or_city.casefold() != q.or_city.casefold():
        return False
    if q.max_duration is not None and package.duration > q.max_duration:
        return False
    if q.n_adults is not None and package.n_adults != q.n_adults:
        return False
    if q.n_children is not None and package.n_children != q.n_children:
        return False
    start, end = _window(q)
    if start is not None and package.flight.departure_date_dep < start:
        return False
    if end is not None and package.flight.departure_date_arr > end:
        return False
    return True


def _sort_key(p: Package):
    return (p.price, p.hotel.name, p.flight.departure_date_dep, p.flight.seat)


def search(db: list[Package], q: SearchQuery) -> list[Package]:
    """Up to ten matching packages, cheapest first."""
    return sorted((p for p in db if matches(p, q)), key=_sort_key)[:MAX_RESULTS]


@dataclass(frozen=True)
class Relaxation:
    field: str
    steps: int


@dataclass
class SuggestResult:
    packages: list[Package] = field(default_factory=list)
    relaxed: list[Relaxation] = field(default_factory=list)
    query: SearchQuery | None = None


def _relax(q: SearchQuery, name: str, steps: int) -> SearchQuery:
    if name == "budget":
        return replace(q, price_max=q.price_max + BUDGET_STEP * steps)
    if name == "dates":
        delta = timedelta(days=DATE_STEP_DAYS * steps)
        return replace(
            q,
            start_date=q.start_date - delta if q.start_date else None,
            end_date=q.end_date + delta if q.end_date else None,
        )
    if name == "duration":
        return replace(q, max_duration=q.max_duration + DURATION_STEP_DAYS * steps)
    if name == "city":
        return replace(q, dst_city=None)
    raise ValueError(f"unknown relaxation field {name!r}")


def _relaxable(q: SearchQuery, name: str) -> bool:
    if name == "budget":
        return q.price_max is not None
    if name == "dates":
        return q.start_date is not None or q.end_date is not None
    if name == "duration":
        return q.max_duration is not None
    if name == "category":
        return False  # category is not a searchable field; kept in the order for config symmetry
    if name == "city":
        return q.dst_city is not None
    return False


RELAXATION_ORDER = ("budget", "dates", "duration", "category", "city")


def suggest(db: list[Package], q: SearchQuery, order: tuple[str, ...] = RELAXATION_ORDER) -> SuggestResult:
    """Packages reachable by relaxing the failed query, three cheapest at most.

    The query must return no results as given; relaxations are applied one
    at a time in priority order and accumulate until something matches.
    """
    if search(db, q):
        raise ValueError("suggest requires a query with no results")
    relaxed_q = q
    applied: list[Relaxation] = []
    for name in order:
        if not _relaxable(relaxed_q, name):
            continue
        max_steps = 1 if name == "city" else MAX_RELAX_STEPS
        hit = None
        for steps in range(1, max_steps + 1):
            candidate = _relax(relaxed_q, name, steps)
            if search(db, candidate):
                hit = (candidate, steps)
                break
        if hit is not None:
            relaxed_q, steps = hit
            applied.append(Relaxation(name, steps))
            return SuggestResult(search(db, relaxed_q)[:3], applied, relaxed_q)
        relaxed_q = _relax(relaxed_q, name, max_steps)
        applied.append(Relaxation(name, max_steps))
    return SuggestResult([], [], q)
