import functools

import pytest

from plovlab.gallery import GALLERY
from plovlab.growth import plov


@functools.lru_cache(maxsize=None)
def gallery_pair(name):
    return GALLERY[name].build()


@functools.lru_cache(maxsize=None)
def gallery_growth(name):
    model, auto = gallery_pair(name)
    return plov(model, auto)


@pytest.fixture(params=sorted(GALLERY))
def gallery_name(request):
    return request.param
