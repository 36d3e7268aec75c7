import inspect

from jinja2 import Environment as JinjaEnvironment
from jinja2 import StrictUndefined, select_autoescape

from hofflab.utilities.types import HoffLabModel

jinja_env = JinjaEnvironment(
    autoescape=select_autoescape(default_for_string=False),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    undefined=StrictUndefined,
)

jinja_env.filters.update(
    {
        # repr() round-trips doubles exactly and is locale independent
        "g17": lambda value: repr(float(value)),
    }
)


class Template(HoffLabModel):
    template: str

    def should_render(self) -> bool:
        return True

    def render(self) -> str:
        if self.should_render():
            render_kwargs = dict(self)
            render_kwargs.pop("template")
            return jinja_env.from_string(inspect.cleandoc(self.template)).render(
                **render_kwargs
            )
        return ""
