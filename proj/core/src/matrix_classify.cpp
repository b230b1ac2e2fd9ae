#include "sil/matrix_classify.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace sil {

namespace {

Eigen::MatrixXd standard_J(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    J.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    return J;
}

std::string decimal_of(double v, int digits) {
    // Truncated decimal of v in (0,1).
    std::ostringstream os;
    os << "0.";
    double x = v;
    for (int i = 0; i < digits; ++i) {
        x *= 10;
        int d = static_cast<int>(std::floor(x));
        d = std::clamp(d, 0, 9);
        os << d;
        x -= d;
    }
    return os.str();
}

} // namespace

NormalForm classify_matrix(const std::vector<double>& matrix, int two_n,
                           double tol) {
    if (two_n < 2 || two_n % 2 != 0) throw Error("matrix dimension must be even");
    if (static_cast<int>(matrix.size()) != two_n * two_n)
        throw Error("matrix size does not match dimension");
    if (tol <= 0 || tol >= 0.1) throw Error("tol must lie in (0, 0.1)");
    const int n = two_n / 2;
    Eigen::MatrixXd M(two_n, two_n);
    for (int r = 0; r < two_n; ++r)
        for (int c = 0; c < two_n; ++c) M(r, c) = matrix[r * two_n + c];

    Eigen::MatrixXd J = standard_J(n);
    double sympl_err = (M.transpose() * J * M - J).norm();
    if (sympl_err > tol) {
        std::ostringstream os;
        os << "matrix is not symplectic within tol (residual " << sympl_err << ")";
        throw CheckFailure(os.str());
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw Error("eigensolver failed");
    Eigen::VectorXcd ev = es.eigenvalues();
    Eigen::MatrixXcd V = es.eigenvectors();

    std::vector<bool> used(two_n, false);
    std::vector<BasicBlock> blocks;
    int digits = std::max(RotationNumber::kMinDigits,
                          std::min(15, static_cast<int>(-std::log10(tol)) - 1));

    // Eigenvalue 1 first: algebraic multiplicity must be 0 or 2.
    std::vector<int> at_one, at_minus_one;
    for (int i = 0; i < two_n; ++i) {
        std::complex<double> l = ev(i);
        if (std::abs(l - 1.0) <= tol) at_one.push_back(i);
        else if (std::abs(l + 1.0) <= tol) at_minus_one.push_back(i);
    }
    auto classify_unipotent = [&](const std::vector<int>& idx, int lambda) {
        if (idx.empty()) return;
        if (idx.size() != 2)
            throw CheckFailure("eigenvalue " + std::to_string(lambda) +
                               " must have algebraic multiplicity 0 or 2");
        double l = lambda;
        Eigen::MatrixXd A = M - l * Eigen::MatrixXd::Identity(two_n, two_n);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
        // Kernel dimension at the tol scale.
        int kdim = 0;
        for (int i = 0; i < two_n; ++i)
            if (svd.singularValues()(i) <= tol * svd.singularValues()(0)) kdim++;
        if (kdim >= 2) {
            blocks.push_back(BlockN1{lambda, 0});
            for (int i : idx) used[i] = true;
            return;
        }
        // One-dimensional kernel: N1(lambda, b) with sign(b) from the Jordan
        // data, b = sign(c / omega(v, w)) for (M - l) w = c v.
        Eigen::VectorXd v = svd.matrixV().col(two_n - 1);
        // Solve (M - l) w = v in least squares; the component along the
        // kernel is irrelevant.
        Eigen::VectorXd w = A.completeOrthogonalDecomposition().solve(v);
        double resid = (A * w - v).norm();
        if (resid > 100 * tol)
            throw CheckFailure("could not resolve the unipotent block at " +
                               std::to_string(lambda));
        double om = w.transpose() * J * v; // omega(v, w) = (Jv).w
        if (std::abs(om) <= tol)
            throw CheckFailure("degenerate symplectic pairing at eigenvalue " +
                               std::to_string(lambda));
        int b = om > 0 ? 1 : -1; // c = 1 by construction
        blocks.push_back(BlockN1{lambda, b});
        for (int i : idx) used[i] = true;
    };
    classify_unipotent(at_one, 1);
    classify_unipotent(at_minus_one, -1);

    // Remaining spectrum.
    for (int i = 0; i < two_n; ++i) {
        if (used[i]) continue;
        std::complex<double> l = ev(i);
        double r = std::abs(l);
        bool on_circle = std::abs(r - 1.0) <= tol;
        bool is_real = std::abs(l.imag()) <= tol;
        if (on_circle && is_real)
            throw CheckFailure("eigenvalue within tol of ±1 ambiguity");
        if (on_circle) {
            if (l.imag() < 0) continue; // handled with its conjugate
            // Check multiplicity 1 among unused upper-half-circle eigenvalues.
            for (int k2 = i + 1; k2 < two_n; ++k2)
                if (!used[k2] && std::abs(ev(k2) - l) <= tol && ev(k2).imag() > 0)
                    throw CheckFailure(
                        "repeated unit-circle eigenvalue: N2 recovery from "
                        "numeric data is not attempted");
            double u = std::arg(l) / (2 * M_PI); // in (0, 1/2)
            if (u < 0) u += 1.0;
            // Krein sign of -iJ on the eigenvector.
            Eigen::VectorXcd w = V.col(i);
            std::complex<double> form =
                (w.adjoint() * (std::complex<double>(0, -1) * J.cast<std::complex<double>>()) * w)(0);
            double kappa = form.real();
            if (std::abs(kappa) <= tol)
                throw CheckFailure("vanishing Krein form on a circle eigenvalue");
            double rho = kappa > 0 ? u : 1.0 - u;
            if (std::abs(rho - 0.5) <= tol)
                throw CheckFailure("rotation number within tol of 1/2");
            blocks.push_back(BlockR{
                RotationNumber::irrational(decimal_of(rho, digits), digits)});
            used[i] = true;
            // Mark the conjugate partner.
            for (int k2 = 0; k2 < two_n; ++k2)
                if (!used[k2] && std::abs(ev(k2) - std::conj(l)) <= tol) {
                    used[k2] = true;
                    break;
                }
        } else if (is_real) {
            // Real pair (lambda, 1/lambda).
            double lam = l.real();
            if (std::abs(lam) <= tol)
                throw CheckFailure("singular eigenvalue");
            int partner = -1;
            for (int k2 = 0; k2 < two_n; ++k2)
                if (k2 != i && !used[k2] &&
                    std::abs(ev(k2) - 1.0 / lam) <= tol * std::abs(1.0 / lam))
                    partner = k2;
            if (partner < 0)
                throw CheckFailure("unpaired real eigenvalue (not symplectic?)");
            blocks.push_back(BlockD{lam > 0 ? 1 : -1});
            used[i] = used[partner] = true;
        } else {
            // Complex off-circle: quadruple lambda, conj, 1/lambda, 1/conj.
            if (r < 1) continue; // count each quadruple at its outside pair
            if (l.imag() < 0) continue;
            std::vector<std::complex<double>> quad = {l, std::conj(l),
                                                      1.0 / l,
                                                      std::conj(1.0 / l)};
            int found = 0;
            for (const auto& target : quad)
                for (int k2 = 0; k2 < two_n; ++k2)
                    if (!used[k2] && std::abs(ev(k2) - target) <=
                                         tol * std::max(1.0, std::abs(target))) {
                        used[k2] = true;
                        found++;
                        break;
                    }
            if (found != 4)
                throw CheckFailure("incomplete off-circle quadruple");
            blocks.push_back(BlockOffCircle{2});
        }
    }

    // Canonical order: N1 blocks, then R by rotation number, then D, then
    // OffCircle; stable and convenient for multiset comparison.
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const BasicBlock& a, const BasicBlock& b) {
                         auto rank = [](const BasicBlock& x) {
                             if (std::holds_alternative<BlockN1>(x)) return 0;
                             if (std::holds_alternative<BlockR>(x)) return 1;
                             if (std::holds_alternative<BlockD>(x)) return 2;
                             if (std::holds_alternative<BlockN2>(x)) return 3;
                             return 4;
                         };
                         return rank(a) < rank(b);
                     });
    NormalForm nf(std::move(blocks));
    if (nf.n() != n)
        throw CheckFailure("classified blocks do not fill the dimension");
    return nf;
}

std::vector<double> realize_matrix(const NormalForm& nf) {
    const int n = nf.n();
    const int N = 2 * n;
    std::vector<double> out(static_cast<size_t>(N) * N, 0.0);
    auto put = [&](int r, int c, double v) { out[static_cast<size_t>(r) * N + c] = v; };
    // Place a 2x2 block [[a,b],[c,d]] acting on (q_k, p_k).
    int k = 0;
    auto place2 = [&](double a, double b, double c, double d) {
        put(k, k, a);
        put(k, n + k, b);
        put(n + k, k, c);
        put(n + k, n + k, d);
        k++;
    };
    for (const auto& blk : nf.blocks()) {
        if (const auto* n1 = std::get_if<BlockN1>(&blk)) {
            place2(n1->lambda, n1->b, 0, n1->lambda);
        } else if (const auto* dd = std::get_if<BlockD>(&blk)) {
            double lam = dd->sign > 0 ? 2.0 : -2.0;
            place2(lam, 0, 0, 1.0 / lam);
        } else if (const auto* r = std::get_if<BlockR>(&blk)) {
            ExactReal t = r->rho.value();
            double theta =
                2 * M_PI * (t.lo().get_d() + t.hi().get_d()) / 2.0;
            place2(std::cos(theta), -std::sin(theta), std::sin(theta),
                   std::cos(theta));
        } else if (std::holds_alternative<BlockN2>(blk)) {
            throw Error("realize_matrix: N2 blocks are not realized");
        } else {
            const auto& oc = std::get<BlockOffCircle>(blk);
            if (oc.half_dim % 2 != 0)
                throw Error("realize_matrix: OffCircle needs even half-dimension");
            for (int q = 0; q < oc.half_dim / 2; ++q) {
                // [[ rR(theta), 0 ], [0, (1/r) R(theta)]] on planes (k, k+1).
                double rr = 2.0, th = M_PI / 4 + 0.1 * q;
                int a = k, b = k + 1;
                put(a, a, rr * std::cos(th));
                put(a, b, -rr * std::sin(th));
                put(b, a, rr * std::sin(th));
                put(b, b, rr * std::cos(th));
                put(n + a, n + a, std::cos(th) / rr);
                put(n + a, n + b, -std::sin(th) / rr);
                put(n + b, n + a, std::sin(th) / rr);
                put(n + b, n + b, std::cos(th) / rr);
                k += 2;
            }
        }
    }
    return out;
}

} // namespace sil
