#pragma once

namespace cocos2d {

class Vec2;

class Node {
public:
    /// Sets the position of the node in its parent's coordinate system.
    void setPosition(const Vec2& position);

    /// Adds a child node with a default z-order of zero.
    void addChild(Node* child);

    /// Removes the node from its parent with a cleanup.
    void removeFromParent();

protected:
    float x_ = 0.0f;
    float y_ = 0.0f;
};

}  // namespace cocos2d
