#include "fpf/circuit_text.hpp"

#include <cctype>
#include <sstream>

namespace fpf {

std::string to_text(const Circuit& c, const CircuitAnnotations& notes) {
    std::ostringstream os;
    os << "fpf-circuit " << kCircuitFormatVersion << "\n";
    os << "INPUTS " << c.input_arity() << "\n";
    const auto& nodes = c.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        os << "#" << i << " = ";
        switch (n.op) {
            case Op::Const: os << "CONST " << format_rational(c.constant(n)); break;
            case Op::Input: os << "INPUT " << n.index; break;
            default: os << op_name(n.op) << "(#" << n.lhs << ", #" << n.rhs << ")"; break;
        }
        os << "\n";
    }
    os << "OUT";
    for (NodeId o : c.outputs()) os << " #" << o;
    os << "\n";
    for (const AuxPair& a : notes.aux) os << "AUX #" << a.in << " #" << a.out << "\n";
    if (notes.primary) os << "PRIMARY " << *notes.primary << "\n";
    if (notes.domain)
        for (std::size_t i = 0; i < notes.domain->dim(); ++i)
            os << "BOX " << i << " " << format_rational(notes.domain->lo[i]) << " "
               << format_rational(notes.domain->hi[i]) << "\n";
    return os.str();
}

namespace {

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    bool at_line_end() {
        skip_blanks();
        return pos_ >= s_.size() || s_[pos_] == '\n';
    }
    bool done() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
        return pos_ >= s_.size();
    }
    void end_line() {
        if (!at_line_end()) fail("trailing characters");
        if (pos_ < s_.size()) advance();
    }
    std::string word() {
        skip_blanks();
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                    s_[pos_] == '-' || s_[pos_] == '/' || s_[pos_] == '_'))
            advance();
        if (start == pos_) fail("expected a token");
        return std::string(s_.substr(start, pos_ - start));
    }
    void expect(char ch) {
        skip_blanks();
        if (pos_ >= s_.size() || s_[pos_] != ch) fail(std::string("expected '") + ch + "'");
        advance();
    }
    std::size_t number() {
        std::string w = word();
        for (char ch : w)
            if (!std::isdigit(static_cast<unsigned char>(ch))) fail("expected a number, got '" + w + "'");
        return std::stoull(w);
    }
    NodeId ref() {
        expect('#');
        return static_cast<NodeId>(number());
    }
    Rational rational() {
        std::string w = word();
        try {
            return parse_rational(w);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, col_); }

private:
    void skip_blanks() {
        while (pos_ < s_.size() && s_[pos_] != '\n' &&
               std::isspace(static_cast<unsigned char>(s_[pos_])))
            advance();
    }
    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view s_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

Op parse_op(const std::string& w, Lexer& lx) {
    for (Op op : {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Max, Op::Min})
        if (w == op_name(op)) return op;
    lx.fail("unknown gate '" + w + "'");
}

}  // namespace

ParsedCircuit parse_circuit_text(std::string_view text) {
    Lexer lx(text);
    lx.done();
    if (lx.word() != "fpf-circuit") lx.fail("missing fpf-circuit header");
    if (lx.number() != static_cast<std::size_t>(kCircuitFormatVersion)) lx.fail("unsupported version");
    lx.end_line();
    lx.done();
    if (lx.word() != "INPUTS") lx.fail("expected INPUTS");
    std::size_t arity = lx.number();
    lx.end_line();

    std::vector<Node> nodes;
    RVec constants;
    std::vector<NodeId> outputs;
    CircuitAnnotations notes;
    std::vector<std::pair<Rational, Rational>> box;
    std::vector<bool> box_seen;
    bool have_out = false;

    while (!lx.done()) {
        std::string head;
        Lexer probe = lx;
        probe.done();
        bool is_node = false;
        try {
            probe.expect('#');
            is_node = true;
        } catch (const ParseError&) {
        }
        if (is_node) {
            if (have_out) lx.fail("node after OUT line");
            NodeId id = lx.ref();
            if (id != nodes.size()) lx.fail("node ids must be consecutive from #0");
            lx.expect('=');
            std::string w = lx.word();
            Node n{Op::Const};
            if (w == "CONST") {
                n.op = Op::Const;
                n.index = static_cast<std::uint32_t>(constants.size());
                constants.push_back(lx.rational());
            } else if (w == "INPUT") {
                n.op = Op::Input;
                n.index = static_cast<std::uint32_t>(lx.number());
                if (n.index >= arity) lx.fail("input index out of range");
            } else {
                n.op = parse_op(w, lx);
                lx.expect('(');
                n.lhs = lx.ref();
                lx.expect(',');
                n.rhs = lx.ref();
                lx.expect(')');
                if (n.lhs >= id || n.rhs >= id) lx.fail("operand must refer to an earlier node");
            }
            nodes.push_back(n);
            lx.end_line();
            continue;
        }
        head = lx.word();
        if (head == "OUT") {
            if (have_out) lx.fail("duplicate OUT line");
            have_out = true;
            while (!lx.at_line_end()) {
                NodeId o = lx.ref();
                if (o >= nodes.size()) lx.fail("output refers to missing node");
                outputs.push_back(o);
            }
        } else if (head == "AUX") {
            NodeId in = lx.ref(), out = lx.ref();
            if (in >= nodes.size() || out >= nodes.size() || nodes[in].op != Op::Input)
                lx.fail("AUX must pair an INPUT node with an existing node");
            notes.aux.push_back({in, out});
        } else if (head == "PRIMARY") {
            notes.primary = lx.number();
        } else if (head == "BOX") {
            std::size_t i = lx.number();
            if (i >= arity) lx.fail("BOX index out of range");
            if (box.empty()) {
                box.resize(arity);
                box_seen.assign(arity, false);
            }
            Rational lo = lx.rational(), hi = lx.rational();
            if (lo > hi) lx.fail("BOX lo > hi");
            box[i] = {lo, hi};
            box_seen[i] = true;
        } else {
            lx.fail("unknown directive '" + head + "'");
        }
        lx.end_line();
    }
    if (!have_out) lx.fail("missing OUT line");
    if (!box.empty()) {
        Box b;
        for (std::size_t i = 0; i < arity; ++i) {
            if (!box_seen[i]) lx.fail("BOX missing coordinate " + std::to_string(i));
            b.lo.push_back(box[i].first);
            b.hi.push_back(box[i].second);
        }
        notes.domain = b;
    }
    try {
        return {Circuit(arity, std::move(nodes), std::move(constants), std::move(outputs)), notes};
    } catch (const InvalidWiring& e) {
        lx.fail(e.what());
    }
}

}  // namespace fpf
