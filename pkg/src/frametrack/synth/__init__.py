from .database import Package, SearchQuery, generate_database, search, suggest
from .simulate import SimulatorConfig, simulate_corpus, simulate_dialogue
from .tasks import DEFAULT_TEMPLATES, GeneratedTask, TaskTemplate, instantiate_tasks

__all__ = [
    "Package",
    "SearchQuery",
    "generate_database",
    "search",
    "suggest",
    "SimulatorConfig",
    "simulate_corpus",
    "simulate_dialogue",
    "DEFAULT_TEMPLATES",
    "GeneratedTask",
    "TaskTemplate",
    "instantiate_tasks",
]
