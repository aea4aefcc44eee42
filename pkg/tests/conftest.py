import pytest

from qgen.blueprint import CourseSpec
from qgen.taxonomy import Taxonomy


@pytest.fixture(scope="session")
def tax() -> Taxonomy:
    return Taxonomy.load()


@pytest.fixture()
def course() -> CourseSpec:
    return CourseSpec(
        code="COIS492",
        title="Web Design & Development",
        topics=("HTML tables", "CSS layout", "HTTP basics"),
        covered_subpoints=("6.2", "4.1", "2.2"),
    )
