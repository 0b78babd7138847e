from collections import defaultdict
import copy
from pathlib import Path
import subprocess
import tempfile
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx # type: ignore

from bimpctools.harness import Transcript
from bimpctools.wire import PartyId


class MessageFlowGraph(nx.DiGraph):
    def __init__(self, base_path: Optional[Path] = None) -> None:
        """Deliveries of a transcript as nodes, with an edge from each
        delivery to the messages emitted while handling it (causal edges)
        and between consecutive messages of a sender→recipient pair
        (FIFO edges)."""
        super().__init__()
        self.base_path = base_path or Path('.')

    @classmethod
    def from_transcript(cls, transcript: Transcript,
                        base_path: Optional[Path] = None) -> 'MessageFlowGraph':
        graph = cls(base_path)
        last_on_pair: Dict[Tuple[PartyId, PartyId], int] = {}
        for entry in transcript.entries:
            message = entry.message
            graph.add_node(entry.index, label=message.describe(),
                           tag=message.tag.label,
                           sender=message.sender.label,
                           recipient=message.recipient.label,
                           size=message.size)
            if entry.cause is not None:
                graph.add_edge(entry.cause, entry.index, causal=True)
            pair = (message.sender, message.recipient)
            if pair in last_on_pair:
                graph.add_edge(last_on_pair[pair], entry.index, fifo=True)
            last_on_pair[pair] = entry.index
        return graph

    def respects_delivery_order(self) -> bool:
        """Every edge points forward in delivery order."""
        return (nx.is_directed_acyclic_graph(self)
                and all(u < v for u, v in self.edges))

    def rounds(self) -> int:
        """Length of the longest causal chain of deliveries."""
        if not self.nodes:
            return 0
        causal = self.edge_subgraph([(u, v) for u, v, is_causal
                                     in self.edges(data="causal") if is_causal])
        return nx.dag_longest_path_length(causal) + 1 if causal.nodes else 1

    def to_dot(self, path: Optional[Path] = None) -> None:
        """Writes itself to a graphviz dot file."""
        path = path or self.base_path/'message_flow.dot'
        nx.drawing.nx_pydot.to_pydot(self).write_dot(str(path))

    def to_gexf(self, path: Optional[Path] = None) -> None:
        """Writes itself to a gexf file, suitable for Gephi."""
        path = path or self.base_path/'message_flow.gexf'
        nx.write_gexf(copy.deepcopy(self), str(path))

    def to_graphml(self, path: Optional[Path] = None) -> None:
        """Writes itself to a graphml file, suitable for yEd."""
        path = path or self.base_path/'message_flow.graphml'
        nx.write_graphml(self, str(path))

    def write(self, path: Path) -> None:
        if path.suffix == '.dot':
            self.to_dot(path)
        elif path.suffix == '.gexf':
            self.to_gexf(path)
        elif path.suffix == '.graphml':
            self.to_graphml(path)
        elif path.suffix in ['.pdf', '.svg', '.png']:
            dot_format = '-T' + path.suffix[1:]
            with tempfile.TemporaryDirectory() as tmpdirname:
                tmpf = Path(tmpdirname)/'tmp.dot'
                self.to_dot(tmpf)
                with path.open('w') as outf:
                    subprocess.run(['dot', dot_format, str(tmpf)],
                                   stdout=outf)
        else:
            raise ValueError('Unsupported graph output format. '
                             'Use .dot, .gexf, .graphml or a valid '
                             'graphviz output format (eg. .pdf).')


def pair_sequences(transcript: Transcript
                   ) -> Dict[Tuple[PartyId, PartyId], List[bytes]]:
    sequences: Dict[Tuple[PartyId, PartyId], List[bytes]] = defaultdict(list)
    for message in transcript.messages:
        sequences[(message.sender, message.recipient)].append(message.encode())
    return dict(sequences)


def is_legal_reordering(reference: Transcript, candidate: Transcript) -> bool:
    """Whether candidate delivers the same messages as reference, in the
    same order on every sender→recipient pair, and never before the
    delivery that caused them."""
    if pair_sequences(reference) != pair_sequences(candidate):
        return False
    return MessageFlowGraph.from_transcript(candidate).respects_delivery_order()


def master_bound_shape(transcript: Transcript
                       ) -> Dict[PartyId, Sequence[Tuple[str, Optional[int], int]]]:
    """(tag, OT index, byte length) of each message the master receives,
    per sender."""
    shape: Dict[PartyId, List[Tuple[str, Optional[int], int]]] = defaultdict(list)
    for message in transcript.messages:
        if message.recipient is PartyId.MASTER:
            shape[message.sender].append((message.tag.label, message.ot_index,
                                          message.size))
    return dict(shape)
