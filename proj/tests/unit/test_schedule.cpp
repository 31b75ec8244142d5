#include <doctest.h>

#include <cmath>
#include <random>

#include "edpc/schedule.hpp"

using namespace edpc;

namespace {

SurfaceSchedule base_schedule(int L) {
    SurfaceSchedule s;
    s.layout.kind = LayoutInfo::Kind::Square;
    s.layout.L = L;
    for (int i = 1; i <= L; ++i)
        for (int j = 1; j <= L; ++j)
            if (i == 1 || i == L || j == 1 || j == L)
                s.layout.boundary.push_back({i, j});
    return s;
}

}  // namespace

TEST_CASE("durations and depth accounting") {
    CHECK(op_duration(OpKind::PrepX) == 0);
    CHECK(op_duration(OpKind::MeasZ) == 0);
    CHECK(op_duration(OpKind::JointXX) == 1);
    CHECK(op_duration(OpKind::Move) == 1);
    CHECK(op_duration(OpKind::BellPrep) == 1);
    CHECK(op_duration(OpKind::BellMeas) == 1);
    CHECK(op_duration(OpKind::Hadamard) == 3);
    CHECK(op_duration(OpKind::Rotation) == 0);

    SurfaceSchedule s = base_schedule(7);
    CHECK(s.depth() == 0);
    CHECK(spacetime_cost(s).spacetime == 0);

    s.append_layer({SurfaceOp{OpKind::JointZZ, {{2, 2}, {3, 2}}}});
    CHECK(s.depth() == 1);
    // a hadamard occupies two further layers
    s.append_layer({SurfaceOp{OpKind::Hadamard,
                              {{2, 2}, {2, 3}, {3, 2}, {3, 3}}}});
    s.append_layer({});
    s.append_layer({});
    CHECK(s.depth() == 4);

    CostReport r = spacetime_cost(s);
    CHECK(r.space == 49);
    CHECK(r.spacetime == r.depth * r.space);

    // boundary-only slots add no depth
    SurfaceSchedule s2 = base_schedule(7);
    s2.attach_prep(SurfaceOp{OpKind::PrepZ, {{2, 2}}});
    s2.flush_pending();
    SurfaceOp mz{OpKind::MeasZ, {{2, 2}}};
    mz.outcome_vars = {0};
    s2.attach_meas(mz);
    CHECK(s2.depth() == 0);
    CHECK(spacetime_cost(s2).spacetime == 0);

    // depth adds over appended blocks
    SurfaceSchedule s3 = base_schedule(7);
    s3.append_layer({SurfaceOp{OpKind::Move, {{1, 1}, {1, 2}}}});
    long d1 = s3.depth();
    s3.append_layer({SurfaceOp{OpKind::Move, {{1, 2}, {1, 3}}}});
    CHECK(s3.depth() == d1 + 1);
}

TEST_CASE("append rejects orientation and collision mistakes eagerly") {
    SurfaceSchedule ok = base_schedule(7);
    ok.append_layer({SurfaceOp{OpKind::JointZZ, {{2, 2}, {3, 2}}}});
    CHECK(ok.validate().empty());

    SurfaceSchedule bad = base_schedule(7);
    CHECK_THROWS_AS(
        bad.append_layer({SurfaceOp{OpKind::JointZZ, {{2, 2}, {2, 3}}}}),
        ScheduleError);

    SurfaceSchedule collide = base_schedule(7);
    CHECK_THROWS_AS(
        collide.append_layer({SurfaceOp{OpKind::Move, {{1, 1}, {1, 2}}},
                              SurfaceOp{OpKind::Move, {{2, 2}, {1, 2}}}}),
        ScheduleError);

    SurfaceSchedule h = base_schedule(7);
    CHECK_THROWS_AS(h.append_layer({SurfaceOp{
                        OpKind::Hadamard, {{2, 2}, {2, 3}, {3, 2}}}}),
                    ScheduleError);  // three patches is not a hadamard cell

    // multi-step occupancy: the hadamard's cell is busy in later layers
    SurfaceSchedule busy = base_schedule(7);
    busy.append_layer(
        {SurfaceOp{OpKind::Hadamard, {{2, 2}, {2, 3}, {3, 2}, {3, 3}}}});
    CHECK_THROWS_AS(
        busy.append_layer({SurfaceOp{OpKind::Move, {{3, 3}, {3, 4}}}}),
        ScheduleError);

    // bell basis must match edge orientation
    SurfaceSchedule bell = base_schedule(7);
    SurfaceOp bp{OpKind::BellPrep, {{1, 1}, {1, 2}}};
    bp.basis = 'z';
    CHECK_THROWS_AS(bell.append_layer({bp}), ScheduleError);

    // rotations belong on the boundary set
    SurfaceSchedule rot = base_schedule(7);
    SurfaceOp r{OpKind::Rotation, {{3, 3}}};
    r.rotation = GateKind::T;
    rot.append_layer({SurfaceOp{OpKind::Move, {{1, 1}, {1, 2}}}});
    CHECK_THROWS_AS(rot.attach_meas(r), ScheduleError);
    SurfaceSchedule rot_ok = base_schedule(7);
    SurfaceOp r2{OpKind::Rotation, {{1, 4}}};
    r2.rotation = GateKind::T;
    rot_ok.append_layer({SurfaceOp{OpKind::Move, {{2, 1}, {2, 2}}}});
    rot_ok.attach_meas(r2);
    CHECK(rot_ok.validate().empty());
}

TEST_CASE("validate catches hand-corrupted schedules") {
    SurfaceSchedule s = base_schedule(7);
    s.append_layer({SurfaceOp{OpKind::JointZZ, {{2, 2}, {3, 2}}},
                    SurfaceOp{OpKind::Move, {{4, 4}, {4, 5}}}});
    CHECK(s.validate().empty());

    // duplicated patch inside a layer
    SurfaceSchedule dup = s;
    dup.layers[0].body.push_back(SurfaceOp{OpKind::Move, {{3, 2}, {3, 3}}});
    CHECK(dup.validate().size() == 1);

    // hadamard with a missing ancilla patch
    SurfaceSchedule h = base_schedule(7);
    h.append_layer({});
    h.layers[0].body.push_back(
        SurfaceOp{OpKind::Hadamard, {{2, 2}, {2, 3}, {3, 2}}});
    CHECK(!h.validate().empty());

    // orientation flip after the fact
    SurfaceSchedule flip = s;
    flip.layers[0].body[0].patches = {{2, 2}, {2, 3}};
    CHECK(!flip.validate().empty());
}

TEST_CASE("physical cost estimate rounds the distance up to odd") {
    auto [d1, a1] = physical_cost_estimate(1e6, 1e-3, 1e-2);
    CHECK(d1 == 13);
    CHECK(a1 == doctest::Approx(1e6 * 13.0 * 13 * 13));

    auto [d2, a2] = physical_cost_estimate(1.0, 1e-3, 1e-2);
    CHECK(d2 == 1);
    CHECK(a2 == doctest::Approx(1.0));

    CHECK_THROWS_AS(physical_cost_estimate(10.0, 1e-2, 1e-3), ScheduleError);
    CHECK_THROWS_AS(physical_cost_estimate(10.0, 1e-2, 1e-2), ScheduleError);
    CHECK_THROWS_AS(physical_cost_estimate(0.5, 1e-3, 1e-2), ScheduleError);

    // frozen table, re-derived from the formula in the test itself
    struct Row {
        double a, p, ps;
        int d;
        double phys;
    };
    const Row rows[] = {
        {1e6, 1e-3, 1e-2, 13, 2.197e9},
        {1.0, 1e-4, 1e-2, 1, 1.0},
        {1e9, 1e-4, 1e-2, 9, 7.29e11},
        {5e7, 1e-3, 1e-2, 17, 2.45650e11},
        {1e3, 1e-5, 1e-2, 3, 2.7e4},
    };
    for (const Row& row : rows) {
        auto [d, phys] = physical_cost_estimate(row.a, row.p, row.ps);
        CHECK(d == row.d);
        CHECK(phys == doctest::Approx(row.phys).epsilon(1e-9));
        double target = 2.0 * std::log(row.a) / (std::log(row.ps) - std::log(row.p));
        CHECK(d >= target);
        CHECK(d % 2 == 1);
        CHECK((d - 2 < target || d == 1));
    }
}

TEST_CASE("schedule json round trips byte for byte") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        SurfaceSchedule s = base_schedule(5 + 2 * (trial % 3));
        s.algorithm = trial % 2 ? "edpc" : "swap";
        s.layout.embedding = {{0, {2, 2}}, {1, {2, 4}}};
        s.layout.final_embedding = s.layout.embedding;
        int layers = 1 + static_cast<int>(rng() % 4);
        for (int t = 0; t < layers; ++t) {
            std::vector<SurfaceOp> ops;
            if (rng() % 2) {
                SurfaceOp op{OpKind::JointZZ, {{2, 2}, {3, 2}}};
                op.outcome_vars = {s.next_outcome_var()};
                if (rng() % 2)
                    op.corrections.push_back(
                        {{op.outcome_vars[0]}, {2, 2}, 'Z'});
                ops.push_back(op);
            }
            if (rng() % 2) {
                SurfaceOp op{OpKind::BellPrep, {{1, 1}, {1, 2}}};
                op.basis = 'x';
                ops.push_back(op);
            }
            if (rng() % 3 == 0) {
                SurfaceOp op{OpKind::PrepX, {{4, 3}}};
                s.attach_prep(op);
            }
            s.append_layer(std::move(ops));
            if (rng() % 3 == 0) {
                SurfaceOp op{OpKind::MeasX, {{4, 3}}};
                op.outcome_vars = {s.next_outcome_var()};
                op.gate_index = static_cast<int>(rng() % 10);
                s.attach_meas(op);
            }
        }
        std::string once = schedule_to_json(s);
        SurfaceSchedule back = schedule_from_json(once);
        std::string twice = schedule_to_json(back);
        CHECK(once == twice);
        CHECK(back.depth() == s.depth());
        CHECK(back.outcome_var_count() == s.outcome_var_count());
    }

    SurfaceSchedule empty = base_schedule(3);
    std::string j = schedule_to_json(empty);
    CHECK(j.find("\"layers\": []") != std::string::npos);
    CHECK_THROWS_AS(schedule_from_json("{\"grid\": {"), ScheduleError);
    CHECK_THROWS_AS(schedule_from_json("{}"), ScheduleError);
}
