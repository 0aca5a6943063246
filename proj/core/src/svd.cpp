#include "lolrec/svd.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "io_util.hpp"
#include "lolrec/errors.hpp"
#include "lolrec/rng.hpp"

namespace lolrec {

void Hyperparams::validate() const {
    if (factors < 1) throw ModelError("factors must be >= 1");
    if (epochs < 1) throw ModelError("epochs must be >= 1");
    if (!(gamma > 0.0)) throw ModelError("gamma (learning rate) must be > 0");
    if (!(lambda >= 0.0)) throw ModelError("lambda (regularization) must be >= 0");
    if (!(init_std >= 0.0)) throw ModelError("init_std must be >= 0");
    if (fold_in_lambda && !(*fold_in_lambda >= 0.0)) {
        throw ModelError("fold_in_lambda must be >= 0");
    }
}

Hyperparams Hyperparams::paper_default() {
    Hyperparams h;
    h.epochs = 20;
    h.lambda = 0.005;
    h.gamma = 0.02;
    return h;
}

Hyperparams Hyperparams::paper_tuned() {
    Hyperparams h;
    h.epochs = 20;
    h.lambda = 0.4;
    h.gamma = 0.0005;
    return h;
}

std::span<const double> FactorModel::user_row(std::uint32_t user) const {
    const auto f = static_cast<std::size_t>(params.factors);
    return {user_factors.data() + user * f, f};
}

std::span<const double> FactorModel::item_row(std::uint32_t item) const {
    const auto f = static_cast<std::size_t>(params.factors);
    return {item_factors.data() + item * f, f};
}

std::span<double> FactorModel::user_row(std::uint32_t user) {
    const auto f = static_cast<std::size_t>(params.factors);
    return {user_factors.data() + user * f, f};
}

std::span<double> FactorModel::item_row(std::uint32_t item) {
    const auto f = static_cast<std::size_t>(params.factors);
    return {item_factors.data() + item * f, f};
}

namespace {

// Maps the dataset's triples into the model's dense item space, validating
// the sgd_epoch precondition that everything is indexed.
std::vector<DenseRating> model_space_ratings(const FactorModel& model, const Dataset& dataset) {
    if (dataset.users.size() != model.n_users) {
        throw ModelError("dataset has " + std::to_string(dataset.users.size()) +
                         " users but the model was initialized for " +
                         std::to_string(model.n_users));
    }
    std::vector<DenseRating> dense;
    dense.reserve(dataset.triples.size());
    for (const auto& triple : dataset.triples) {
        const auto item = model.items.find(triple.champion_id);
        if (!item) {
            throw ModelError("champion " + std::to_string(triple.champion_id) +
                             " is not indexed in the model");
        }
        dense.push_back({*dataset.users.find(triple.player_id), *item,
                         static_cast<double>(triple.rating)});
    }
    return dense;
}

void run_epoch(FactorModel& model, const std::vector<DenseRating>& ratings) {
    const int f = model.params.factors;
    const double gamma = model.params.gamma;
    const double lambda = model.params.lambda;

    std::vector<std::uint32_t> order(ratings.size());
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(mix_seed(model.params.seed, static_cast<std::uint64_t>(model.epochs_done) + 1));
    rng.shuffle(order);

    for (const auto index : order) {
        const auto& r = ratings[index];
        double* p = model.user_factors.data() + static_cast<std::size_t>(r.user) * f;
        double* q = model.item_factors.data() + static_cast<std::size_t>(r.item) * f;
        double dot = 0.0;
        for (int k = 0; k < f; ++k) dot += p[k] * q[k];
        const double err = r.rating - dot;
        for (int k = 0; k < f; ++k) {
            const double pk = p[k];
            const double qk = q[k];
            p[k] += gamma * (err * qk - lambda * pk);
            q[k] += gamma * (err * pk - lambda * qk);
        }
    }
    ++model.epochs_done;
}

double objective_dense(const FactorModel& model, const std::vector<DenseRating>& ratings) {
    const int f = model.params.factors;
    const double lambda = model.params.lambda;
    double total = 0.0;
    for (const auto& r : ratings) {
        const double* p = model.user_factors.data() + static_cast<std::size_t>(r.user) * f;
        const double* q = model.item_factors.data() + static_cast<std::size_t>(r.item) * f;
        double dot = 0.0, p2 = 0.0, q2 = 0.0;
        for (int k = 0; k < f; ++k) {
            dot += p[k] * q[k];
            p2 += p[k] * p[k];
            q2 += q[k] * q[k];
        }
        const double err = r.rating - dot;
        total += err * err + lambda * (p2 + q2);
    }
    return total;
}

}  // namespace

FactorModel init_model(const Dataset& dataset, const Hyperparams& hyperparams) {
    hyperparams.validate();
    if (dataset.users.size() == 0 || dataset.items.size() == 0) {
        throw DataError("cannot initialize a model from an empty dataset");
    }

    FactorModel model;
    model.params = hyperparams;
    model.items = dataset.items;
    model.n_users = dataset.users.size();
    const auto f = static_cast<std::size_t>(hyperparams.factors);
    model.user_factors.resize(model.n_users * f);
    model.item_factors.resize(dataset.items.size() * f);

    Rng rng(hyperparams.seed);
    for (auto& value : model.user_factors) value = rng.normal(0.0, hyperparams.init_std);
    for (auto& value : model.item_factors) value = rng.normal(0.0, hyperparams.init_std);
    return model;
}

void sgd_epoch(FactorModel& model, const Dataset& dataset) {
    run_epoch(model, model_space_ratings(model, dataset));
}

double objective(const FactorModel& model, const Dataset& dataset) {
    return objective_dense(model, model_space_ratings(model, dataset));
}

TrainResult train(const Dataset& dataset, const Hyperparams& hyperparams) {
    TrainResult result;
    result.model = init_model(dataset, hyperparams);
    const auto ratings = model_space_ratings(result.model, dataset);
    result.objective_trace.reserve(hyperparams.epochs);
    for (int epoch = 0; epoch < hyperparams.epochs; ++epoch) {
        run_epoch(result.model, ratings);
        result.objective_trace.push_back(objective_dense(result.model, ratings));
    }
    return result;
}

double predict(const FactorModel& model, std::span<const double> user_vector,
               std::int32_t champion_id) {
    const auto item = model.items.find(champion_id);
    if (!item) throw ModelError("unknown champion " + std::to_string(champion_id));
    if (user_vector.size() != static_cast<std::size_t>(model.params.factors)) {
        throw ModelError("user vector has length " + std::to_string(user_vector.size()) +
                         ", expected " + std::to_string(model.params.factors));
    }
    const auto q = model.item_row(*item);
    double dot = 0.0;
    for (std::size_t k = 0; k < user_vector.size(); ++k) dot += user_vector[k] * q[k];
    return std::clamp(dot, FactorModel::kMinRating, FactorModel::kMaxRating);
}

namespace {

// Solves the SPD system M x = b in place via Cholesky. Throws ModelError
// when M is not positive definite (singular fold-in system).
std::vector<double> cholesky_solve(std::vector<double> m, std::vector<double> b, int n) {
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) {
        max_diag = std::max(max_diag, std::fabs(m[static_cast<std::size_t>(i) * n + i]));
    }
    const double pivot_floor = 1e-12 * std::max(max_diag, 1e-300);

    // Lower-triangular factorization, L stored in m.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = m[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < j; ++k) {
                sum -= m[static_cast<std::size_t>(i) * n + k] * m[static_cast<std::size_t>(j) * n + k];
            }
            if (i == j) {
                if (!(sum > pivot_floor)) {
                    throw ModelError("fold-in system is singular; use a positive fold_in_lambda");
                }
                m[static_cast<std::size_t>(i) * n + j] = std::sqrt(sum);
            } else {
                m[static_cast<std::size_t>(i) * n + j] = sum / m[static_cast<std::size_t>(j) * n + j];
            }
        }
    }
    // Forward substitution L y = b.
    for (int i = 0; i < n; ++i) {
        double sum = b[i];
        for (int k = 0; k < i; ++k) sum -= m[static_cast<std::size_t>(i) * n + k] * b[k];
        b[i] = sum / m[static_cast<std::size_t>(i) * n + i];
    }
    // Back substitution L^T x = y.
    for (int i = n - 1; i >= 0; --i) {
        double sum = b[i];
        for (int k = i + 1; k < n; ++k) sum -= m[static_cast<std::size_t>(k) * n + i] * b[k];
        b[i] = sum / m[static_cast<std::size_t>(i) * n + i];
    }
    return b;
}

}  // namespace

std::vector<double> fold_in(const FactorModel& model, std::span<const ProfileEntry> profile,
                            std::optional<double> reg) {
    if (profile.empty()) throw DataError("empty profile");
    const double lambda = reg.value_or(model.params.effective_fold_in_lambda());
    if (!(lambda >= 0.0)) throw ModelError("fold-in regularization must be >= 0");

    const int f = model.params.factors;
    std::vector<double> normal(static_cast<std::size_t>(f) * f, 0.0);
    std::vector<double> rhs(f, 0.0);
    for (const auto& entry : profile) {
        const auto item = model.items.find(entry.champion_id);
        if (!item) throw ModelError("unknown champion " + std::to_string(entry.champion_id));
        const auto q = model.item_row(*item);
        for (int i = 0; i < f; ++i) {
            rhs[i] += q[i] * entry.rating;
            for (int j = 0; j <= i; ++j) {
                normal[static_cast<std::size_t>(i) * f + j] += q[i] * q[j];
            }
        }
    }
    for (int i = 0; i < f; ++i) {
        normal[static_cast<std::size_t>(i) * f + i] += lambda;
        for (int j = i + 1; j < f; ++j) {
            normal[static_cast<std::size_t>(i) * f + j] = normal[static_cast<std::size_t>(j) * f + i];
        }
    }
    return cholesky_solve(std::move(normal), std::move(rhs), f);
}

double fold_in_objective(const FactorModel& model, std::span<const ProfileEntry> profile,
                         std::span<const double> user_vector, std::optional<double> reg) {
    const double lambda = reg.value_or(model.params.effective_fold_in_lambda());
    double total = 0.0;
    for (const auto& entry : profile) {
        const auto item = model.items.find(entry.champion_id);
        if (!item) throw ModelError("unknown champion " + std::to_string(entry.champion_id));
        const auto q = model.item_row(*item);
        double dot = 0.0;
        for (std::size_t k = 0; k < user_vector.size(); ++k) dot += q[k] * user_vector[k];
        const double err = entry.rating - dot;
        total += err * err;
    }
    double norm2 = 0.0;
    for (const double v : user_vector) norm2 += v * v;
    return total + lambda * norm2;
}

namespace {

constexpr char kModelMagic[8] = {'L', 'O', 'L', 'R', 'E', 'C', 'M', 'F'};
constexpr std::uint32_t kModelVersion = 1;

template <class T>
void append_raw(std::string& buffer, const T& value) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* bytes = reinterpret_cast<const char*>(&value);
    buffer.append(bytes, sizeof(T));
}

void append_doubles(std::string& buffer, const std::vector<double>& values) {
    const auto* bytes = reinterpret_cast<const char*>(values.data());
    buffer.append(bytes, values.size() * sizeof(double));
}

struct Cursor {
    const char* data;
    std::size_t size;
    std::size_t offset = 0;

    void require(std::size_t n) const {
        if (offset + n > size) throw ModelError("truncated model file");
    }

    template <class T>
    T read() {
        static_assert(std::is_trivially_copyable_v<T>);
        require(sizeof(T));
        T value;
        std::memcpy(&value, data + offset, sizeof(T));
        offset += sizeof(T);
        return value;
    }

    void read_doubles(std::vector<double>& out, std::size_t count) {
        require(count * sizeof(double));
        out.resize(count);
        std::memcpy(out.data(), data + offset, count * sizeof(double));
        offset += count * sizeof(double);
    }
};

}  // namespace

void save_model(const FactorModel& model, const std::filesystem::path& path) {
    std::string buffer;
    buffer.reserve(64 + model.items.size() * sizeof(std::int32_t) +
                   (model.user_factors.size() + model.item_factors.size()) * sizeof(double));
    buffer.append(kModelMagic, sizeof(kModelMagic));
    append_raw(buffer, kModelVersion);
    append_raw(buffer, static_cast<std::uint32_t>(model.params.factors));
    append_raw(buffer, static_cast<std::uint64_t>(model.n_users));
    append_raw(buffer, static_cast<std::uint64_t>(model.items.size()));
    append_raw(buffer, static_cast<std::int32_t>(model.params.epochs));
    append_raw(buffer, model.params.gamma);
    append_raw(buffer, model.params.lambda);
    append_raw(buffer, model.params.init_std);
    append_raw(buffer, static_cast<std::uint8_t>(model.params.fold_in_lambda.has_value()));
    append_raw(buffer, model.params.fold_in_lambda.value_or(0.0));
    append_raw(buffer, model.params.seed);
    append_raw(buffer, static_cast<std::int32_t>(model.epochs_done));
    for (const auto champion_id : model.items.keys()) append_raw(buffer, champion_id);
    append_doubles(buffer, model.item_factors);
    append_doubles(buffer, model.user_factors);
    detail::write_file_atomic(path, buffer);
}

FactorModel load_model(const std::filesystem::path& path) {
    const auto content = detail::read_file(path);
    if (!content) throw ModelError("cannot open model file '" + path.string() + "'");
    Cursor cursor{content->data(), content->size()};

    cursor.require(sizeof(kModelMagic));
    if (std::memcmp(cursor.data, kModelMagic, sizeof(kModelMagic)) != 0) {
        throw ModelError("'" + path.string() + "' is not a model file");
    }
    cursor.offset += sizeof(kModelMagic);

    const auto version = cursor.read<std::uint32_t>();
    if (version != kModelVersion) {
        throw ModelError("unsupported model format version " + std::to_string(version));
    }

    FactorModel model;
    model.params.factors = static_cast<int>(cursor.read<std::uint32_t>());
    model.n_users = cursor.read<std::uint64_t>();
    const auto n_items = cursor.read<std::uint64_t>();
    model.params.epochs = cursor.read<std::int32_t>();
    model.params.gamma = cursor.read<double>();
    model.params.lambda = cursor.read<double>();
    model.params.init_std = cursor.read<double>();
    const bool has_fold_in = cursor.read<std::uint8_t>() != 0;
    const double fold_in_value = cursor.read<double>();
    if (has_fold_in) model.params.fold_in_lambda = fold_in_value;
    model.params.seed = cursor.read<std::uint64_t>();
    model.epochs_done = cursor.read<std::int32_t>();

    for (std::uint64_t i = 0; i < n_items; ++i) {
        model.items.add(cursor.read<std::int32_t>());
    }
    if (model.items.size() != n_items) throw ModelError("duplicate items in model file");

    const auto f = static_cast<std::size_t>(model.params.factors);
    cursor.read_doubles(model.item_factors, n_items * f);
    cursor.read_doubles(model.user_factors, model.n_users * f);
    if (cursor.offset != cursor.size) throw ModelError("trailing bytes in model file");
    return model;
}

}  // namespace lolrec
