#include <sstream>
#include <stdexcept>

#include "flycheck/bench.hpp"

namespace flycheck::bench {

std::string generate_herman(unsigned n) {
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("Herman ring size must be odd and at least 3");
    auto x = [](unsigned i) { return "x" + std::to_string(i); };
    auto pred = [n](unsigned i) { return i == 1 ? n : i - 1; };

    std::ostringstream os;
    os << "// Herman's self-stabilising ring, N=" << n << ".\n"
       << "// Process i holds a token iff x_i = x_(i-1); token holders flip a fair coin,\n"
       << "// the others copy their predecessor. All processes move synchronously.\n"
       << "dtmc\n\n";
    for (unsigned i = 1; i <= n; ++i) os << "formula t" << i << " = " << x(i) << "=" << x(pred(i)) << ";\n";

    os << "\nmodule process1\n"
       << "  x1 : [0..1] init 0;\n\n"
       << "  [step] x1=" << x(n) << " -> 0.5:(x1'=0) + 0.5:(x1'=1);\n"
       << "  [step] x1!=" << x(n) << " -> (x1'=" << x(n) << ");\n"
       << "endmodule\n\n";
    for (unsigned i = 2; i <= n; ++i) {
        os << "module process" << i << " = process1 [x1=" << x(i) << ", " << x(n) << "=" << x(pred(i))
           << "] endmodule\n";
    }

    os << "\n// exactly one token\nlabel \"stable\" =";
    for (unsigned i = 1; i <= n; ++i) {
        os << (i == 1 ? " " : "\n  | ") << "(t" << i;
        for (unsigned j = 1; j <= n; ++j) {
            if (j != i) os << " & !t" << j;
        }
        os << ")";
    }
    os << ";\nlabel \"token1\" = t1;\n";
    return os.str();
}

}  // namespace flycheck::bench
