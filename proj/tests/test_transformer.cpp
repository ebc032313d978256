#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gradcheck.hpp"
#include "oracles.hpp"
#include "socbench/transformer.hpp"

using namespace soc;

TEST_CASE("positional encoding values") {
    Tensor pe = positional_encoding(4, 8);
    REQUIRE(pe.shape() == std::vector<std::size_t>{4, 8});

    // position 0: sin(0) = 0, cos(0) = 1, alternating
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(pe.at(0, 2 * i) == 0.0);
        CHECK(pe.at(0, 2 * i + 1) == 1.0);
    }

    // direct formula, every cell
    for (std::size_t pos = 0; pos < 4; ++pos) {
        for (std::size_t i = 0; i < 4; ++i) {
            const double angle = pos / std::pow(10000.0, 2.0 * i / 8.0);
            CHECK(pe.at(pos, 2 * i) == doctest::Approx(std::sin(angle)).epsilon(1e-15));
            CHECK(pe.at(pos, 2 * i + 1) == doctest::Approx(std::cos(angle)).epsilon(1e-15));
        }
    }
    for (double v : pe.data()) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }

    CHECK_THROWS_AS((void)positional_encoding(2, 7), Error);
}

TEST_CASE("variant names round trip") {
    for (auto v : {TransformerVariant::AttentionOnly, TransformerVariant::PositionalOnly,
                   TransformerVariant::Full})
        CHECK(transformer_variant_from_string(to_string(v)) == v);
    CHECK_THROWS_AS((void)transformer_variant_from_string("bogus"), Error);
}

TEST_CASE("attention on a length-1 sequence is the identity mixture") {
    std::mt19937_64 rng(81);
    MultiHeadAttention mha(8, 2, rng);
    std::normal_distribution<double> gauss;
    Tensor x({3, 1, 8});
    for (auto& v : x.data()) v = gauss(rng);
    (void)mha.forward(x, x, x);
    const Tensor& attn = mha.attention_weights();
    REQUIRE(attn.shape() == std::vector<std::size_t>{6, 1, 1});
    for (double w : attn.data()) CHECK(w == 1.0);  // softmax over one key
}

TEST_CASE("attention rows are a probability distribution") {
    std::mt19937_64 rng(82);
    MultiHeadAttention mha(8, 2, rng);
    std::normal_distribution<double> gauss;
    Tensor x({2, 3, 8});
    for (auto& v : x.data()) v = gauss(rng);
    (void)mha.forward(x, x, x);
    const Tensor& attn = mha.attention_weights();
    REQUIRE(attn.shape() == std::vector<std::size_t>{4, 3, 3});
    for (std::size_t bh = 0; bh < 4; ++bh)
        for (std::size_t i = 0; i < 3; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < 3; ++j) {
                const double w = attn.at(bh, i, j);
                CHECK(w >= 0.0);
                sum += w;
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
}

TEST_CASE("head count must divide d_model") {
    std::mt19937_64 rng(83);
    CHECK_THROWS_AS(MultiHeadAttention(8, 3, rng), Error);
    CHECK_THROWS_AS(MultiHeadAttention(8, 0, rng), Error);
}

TEST_CASE("self-attention gradient check") {
    std::mt19937_64 rng(84);
    Sequential net;
    net.add(std::make_unique<SelfAttentionLayer>(8, 2, rng));
    std::normal_distribution<double> gauss;
    Tensor x({2, 3, 8}), target({2, 3, 8});
    for (auto& v : x.data()) v = gauss(rng);
    for (auto& v : target.data()) v = gauss(rng);
    auto result = gradcheck::check_params(net, x, target, 1e-5);
    CHECK(result.checked == 8 * 8 * 4 + 8 * 4);
    CHECK(result.max_rel_error < 1e-4);
}

TEST_CASE("layer norm maps constant rows to the bias") {
    LayerNormLayer norm(4);
    Tensor x({2, 1, 4}, 7.5);
    Tensor out = norm.forward(x, false);
    for (double v : out.data()) CHECK(std::abs(v) < 1e-10);  // bias starts at zero
}

TEST_CASE("layer norm gradient check") {
    std::mt19937_64 rng(85);
    Sequential net;
    net.add(std::make_unique<LayerNormLayer>(6));
    std::normal_distribution<double> gauss;
    Tensor x({3, 1, 6}), target({3, 1, 6});
    for (auto& v : x.data()) v = gauss(rng);
    for (auto& v : target.data()) v = gauss(rng);
    auto result = gradcheck::check_params(net, x, target, 1e-5);
    CHECK(result.checked == 12);
    CHECK(result.max_rel_error < 1e-4);
}

TEST_CASE("dropout statistics and eval behavior") {
    const double rate = 0.4;
    DropoutLayer dropout(rate, 99);
    Tensor x({100, 10, 100}, 2.0);  // 1e5 elements

    Tensor out = dropout.forward(x, true);
    std::size_t zeros = 0;
    const double keep_scale = 2.0 / (1.0 - rate);
    for (double v : out.data()) {
        if (v == 0.0)
            ++zeros;
        else
            CHECK(v == keep_scale);  // survivors scaled exactly 1/(1-rate)
    }
    const double n = static_cast<double>(x.size());
    const double sigma = std::sqrt(rate * (1.0 - rate) / n);
    CHECK(std::abs(zeros / n - rate) < 4.0 * sigma);

    // evaluation mode is the identity, for values and gradients
    Tensor eval_out = dropout.forward(x, false);
    CHECK(eval_out.data() == x.data());
    Tensor grad({100, 10, 100}, 3.0);
    CHECK(dropout.backward(grad).data() == grad.data());

    CHECK_THROWS_AS(DropoutLayer(1.0, 1), Error);
    CHECK_THROWS_AS(DropoutLayer(-0.1, 1), Error);
}

TEST_CASE("variant forward shapes and eval determinism") {
    for (auto variant : {TransformerVariant::AttentionOnly, TransformerVariant::PositionalOnly,
                         TransformerVariant::Full}) {
        TransformerConfig config;
        config.variant = variant;
        auto net = build_transformer(24, config);
        Tensor x = reshape_input(Matrix(5, 24, 0.25));
        Tensor a = net.forward(x, false);
        CHECK(a.shape() == std::vector<std::size_t>{5, 1, 1});
        CHECK(net.forward(x, false).data() == a.data());  // dropout off at eval
    }
    CHECK_THROWS_AS((void)build_transformer(0, TransformerConfig{}), Error);
    TransformerConfig bad;
    bad.n_heads = 5;
    CHECK_THROWS_AS((void)build_transformer(4, bad), Error);
}

TEST_CASE("positional encoding changes the full variant's output") {
    TransformerConfig config;
    config.variant = TransformerVariant::Full;
    auto net = build_transformer(6, config);
    PositionalEncodingLayer* pe = nullptr;
    for (Layer* layer : net.layers())
        if (auto* p = dynamic_cast<PositionalEncodingLayer*>(layer)) pe = p;
    REQUIRE(pe != nullptr);

    std::mt19937_64 rng(86);
    std::normal_distribution<double> gauss;
    Matrix x(4, 6);
    for (auto& v : x.data) v = gauss(rng);

    Tensor with_pe = net.forward(reshape_input(x), false);
    pe->enabled = false;
    Tensor without_pe = net.forward(reshape_input(x), false);
    pe->enabled = true;
    CHECK(with_pe.data() != without_pe.data());

    // the fixed table matches the standalone function
    CHECK(pe->table() == positional_encoding(1, config.d_model));
}

TEST_CASE("tiny full transformer gradient check") {
    TransformerConfig config;
    config.variant = TransformerVariant::Full;
    config.d_model = 4;
    config.n_heads = 2;
    config.hidden_units = 4;
    auto net = build_transformer(3, config);

    std::mt19937_64 rng(87);
    std::normal_distribution<double> gauss;
    Matrix x(3, 3);
    for (auto& v : x.data) v = gauss(rng);
    Tensor target({3, 1, 1});
    for (auto& v : target.data()) v = gauss(rng);

    auto result = gradcheck::check_params(net, reshape_input(x), target, 1e-5, 1e-3);
    CHECK(result.checked > 50);
    CHECK(result.max_rel_error < 1e-3);
}

TEST_CASE("all variants train without numerical blowup") {
    std::mt19937_64 rng(88);
    Matrix X = oracle::random_matrix(400, 4, rng);
    std::normal_distribution<double> gauss;
    Vector y(400);
    for (std::size_t i = 0; i < 400; ++i)
        y[i] = 2.0 * X(i, 0) - X(i, 1) + 0.5 * X(i, 2) * X(i, 3) + 0.05 * gauss(rng);

    for (auto variant : {TransformerVariant::AttentionOnly, TransformerVariant::PositionalOnly,
                         TransformerVariant::Full}) {
        TransformerConfig config;
        config.variant = variant;
        config.d_model = 8;
        config.n_heads = 2;
        config.hidden_units = 16;
        auto net = build_transformer(4, config);
        Adam opt;
        TrainConfig tc;
        tc.epochs = 50;
        tc.batch_size = 100;
        tc.shuffle_seed = 4;
        auto history = train(net, X, y, X, y, tc, opt);
        for (double v : history.train_loss) CHECK(std::isfinite(v));
        CHECK(history.train_loss.back() < 0.5 * history.train_loss.front());
        for (Param* p : net.params()) CHECK(p->value.finite());
    }
}

TEST_CASE("model wrapper: fit, attention weights, serialization") {
    std::mt19937_64 rng(89);
    Matrix X = oracle::random_matrix(120, 3, rng);
    Vector y(120);
    for (std::size_t i = 0; i < 120; ++i) y[i] = 50.0 + 20.0 * X(i, 0);

    TransformerConfig config;
    config.variant = TransformerVariant::Full;
    config.d_model = 8;
    config.n_heads = 2;
    config.hidden_units = 8;
    TrainConfig tc;
    tc.epochs = 10;
    tc.batch_size = 40;
    TransformerModel model(config, tc);
    CHECK_THROWS_AS((void)model.predict(X), Error);
    model.fit(X, y);
    CHECK(model.name() == "Transformer (Self-Attention + Positional Encoding)");

    auto pred = model.predict(X);
    REQUIRE(pred.size() == X.rows);

    Tensor attn = model.last_attention_weights();
    REQUIRE(attn.size() == 120 * 2);  // batch*heads rows of a 1x1 map
    for (double w : attn.data()) CHECK(w == 1.0);

    const std::string path = "attn_test.csv";
    TransformerModel::attention_weights_to_csv(attn, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "batch_head,query_pos,key_pos,weight");
    std::string first;
    std::getline(in, first);
    CHECK(first == "0,0,0,1");
    in.close();
    std::remove(path.c_str());

    auto reloaded = TransformerModel::from_json(model.to_json());
    CHECK(reloaded.predict(X) == pred);

    // the positional-only variant exposes no attention weights
    TransformerConfig pconfig = config;
    pconfig.variant = TransformerVariant::PositionalOnly;
    TransformerModel pmodel(pconfig, tc);
    pmodel.fit(X, y);
    (void)pmodel.predict(X);
    CHECK(pmodel.last_attention_weights().size() == 0);
    CHECK(pmodel.name() == "Transformer (Positional Encoding)");
}
