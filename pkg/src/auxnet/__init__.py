"""Online deep learning for streams whose auxiliary inputs come and go.

The model keeps one persistent knowledge base covering every layer and
instantiates, at each time step, an active network matching the subset of
auxiliary features actually present. Hot numeric kernels run through a
compiled extension when available, with a pure-numpy fallback selected at
import (see auxnet.kernels).
"""

from .errors import ContractViolation, DataFormatError
from .kernels import available_backends, backend_name, set_backend
from .layer import (LayerActivation, LayerParams, backprop_through_layer,
                    classifier_grad_hidden, classifier_grad_theta, layer_forward)
from .metrics import RunMetrics, read_step_csv, reaggregate, write_step_csv
from .model import (ActiveModel, ForwardTrace, KnowledgeBase, NetworkConfig,
                    UpdateReport, create_model, ensemble_loss, forward,
                    init_knowledge_base, merge_knowledge, run_stream, update_step)
from .numeric import AdamState, adam_update, cross_entropy, relu, softmax
from .odl import OnlineDeepLearner, run_stream_odl
from .snapshot import load_knowledge_base, save_knowledge_base
from .stream import (AvailabilitySchedule, Dataset, StreamInstance,
                     base_only_stream, load_ucr, make_schedule, split_stream)

__version__ = "0.1.0"
