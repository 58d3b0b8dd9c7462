#include "cocos2d.h"

using namespace cocos2d;

bool MenuScene::init() {
    if (!Scene::init()) {
        return false;
    }
    buildMenu();
    return true;
}

void MenuScene::buildMenu() {
    auto title = Label::createWithTTF("Quest", "fonts/marker.ttf", 48.0f);
    title->setPosition(Vec2(240.0f, 280.0f));
    auto startItem = MenuItemImage::create("start.png", "start_on.png");
    auto menu = Menu::create(startItem, nullptr);
    menu->setPosition(Vec2::ZERO);
    this->addChild(title);
    this->addChild(menu);
}

void MenuScene::closeCallback() {
    Director::getInstance()->end();
}

float scaleForWidth(float width) {
    float base = 480.0f;
    return width / base;
}
