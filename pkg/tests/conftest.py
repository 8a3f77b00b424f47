import pytest

from pipesynth.descriptors import Alternative, MethodDescriptor, Vocabulary
from pipesynth.enumerator import build_tree
from pipesynth.tasks import load_task_by_id
from pipesynth.values import TStr


def _str_letter(token_id: str, builtin: str, args=(), lambda_id=None) -> MethodDescriptor:
    return MethodDescriptor(
        token_id=token_id,
        builtin_op=builtin,
        alternatives=(Alternative(TStr(), TStr()),),
        bound_args=tuple(args),
        lambda_id=lambda_id,
        display_text=token_id,
    )


# Five Str -> Str letters: every token sequence is well-typed, so the
# exhaustive space at length 5 is 5^0 + ... + 5^5 = 3906 programs and a
# brute-force oracle can enumerate it directly.
TOY_LETTERS = (
    _str_letter("reverse", "reverse"),
    _str_letter("sorted", "sorted"),
    _str_letter("tail", "tail"),
    _str_letter("take(2)", "take", args=(2,)),
    _str_letter("distinct", "distinct"),
)


@pytest.fixture(scope="session")
def toy_vocab() -> Vocabulary:
    return Vocabulary("toy", TStr(), TOY_LETTERS)


@pytest.fixture(scope="session")
def toy_tree_pristine(toy_vocab):
    """Shared unpruned toy space. Tests must not prune this instance."""
    return build_tree(toy_vocab, 5)


@pytest.fixture()
def build_toy_tree(toy_vocab):
    def make(max_length: int = 5, **kw):
        return build_tree(toy_vocab, max_length, **kw)

    return make


@pytest.fixture(scope="session")
def freqbigram():
    return load_task_by_id("freqbigram")
